// Build the bindings first: wasm-pack build --target web --out-dir www/pkg (from crates/web).
import init, { region_rgba, region_legend, inspect, histogram, persistence } from "./pkg/qwalk_web.js";

const NT = 181;
const NP = 360;

function params() {
  return {
    family: document.getElementById("family").value,
    obs: document.getElementById("observable").value,
    omega: parseFloat(document.getElementById("omega").value) || 0,
    cycles: Math.max(1, parseInt(document.getElementById("cycles").value, 10) || 1),
    home: document.getElementById("home").value.trim(),
  };
}

function drawMap(p) {
  const px = region_rgba(p.family, p.obs, p.omega, p.cycles, NT, NP);
  const canvas = document.getElementById("map");
  canvas.width = NP;
  canvas.height = NT;
  canvas.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(px), NP, NT), 0, 0);
  const legend = JSON.parse(region_legend(p.family, p.obs, p.omega, p.cycles, NT, NP));
  document.getElementById("legend").innerHTML = legend
    .map((e) => `<span style="background:${e.color}"></span>${e.label} (${e.count})`)
    .join("");
}

function drawHome(p) {
  const info = JSON.parse(inspect(p.family, p.obs, p.omega, p.cycles, p.home));
  const pays = info.payoffs.map((x, i) => `W${i + 1}: ${x.toFixed(3)}`).join("  ");
  document.getElementById("inspect").textContent =
    `${pays}\nlabels ${info.labels}${info.parrondo ? "  (Parrondo)" : ""}`;
  const last = info.payoffs.length - 1;
  document.getElementById("hist").innerHTML = histogram(p.family, p.cycles, last, p.home);
  document.getElementById("persist").innerHTML = persistence(p.family, p.obs, p.omega, p.home, 19);
}

function update(ev) {
  if (ev) ev.preventDefault();
  const p = params();
  try {
    drawMap(p);
    drawHome(p);
  } catch (e) {
    document.getElementById("inspect").textContent = `error: ${e}`;
  }
}

await init();
document.getElementById("controls").addEventListener("submit", update);
update();
