//! Exact-enumeration versions of the martingale experiment and numeric
//! forms of the appendix lemmas.

mod classify;
mod martingale;
mod oracles;

pub use classify::{classify_blocks, BlockLabel, Classification};
pub use martingale::{
    block_length, martingale_trace, BlockStat, LevelStats, MartingaleConfig, MartingaleTrace, Padding,
};
pub use oracles::{f_max, nonpositivity_lhs, three_valued_var_bound, Scalar};
