// Built with: wasm-pack build crates/wasm-demo --target web --out-dir www/pkg
import init, { regionSvg, innerDecodeDemo, adversaryDemo } from "./pkg/insdel_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(target, run, asHtml = false) {
  try {
    const out = run();
    if (asHtml) {
      target.innerHTML = out;
    } else {
      target.textContent = JSON.stringify(JSON.parse(out), null, 2);
    }
    target.classList.remove("err");
  } catch (e) {
    target.textContent = String(e.message ?? e);
    target.classList.add("err");
  }
}

await init();

$("r-go").onclick = () =>
  show($("r-out"), () => regionSvg($("r-q").value, $("r-points").value, $("r-shrink").value), true);

$("d-go").onclick = () =>
  show($("d-out"), () =>
    innerDecodeDemo(num("d-n"), $("d-eps").value, num("d-q"), num("d-index"), num("d-del"), num("d-ins"), num("d-seed")));

$("a-go").onclick = () =>
  show($("a-out"), () => adversaryDemo(num("a-q"), num("a-n"), num("a-i"), $("a-alpha").value, num("a-seed")));

$("r-go").click();
