import init, { spectrum, boost, Simulation } from "./pkg/dwm_wasm.js";

const $ = (id) => document.getElementById(id);

function frame(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const pad = 36;
  const [x0, x1] = xs;
  const [y0, y1] = ys;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, pad + h);
  ctx.fillText(x0.toPrecision(3), pad, pad + h + 14);
  ctx.fillText(x1.toPrecision(3), pad + w - 24, pad + h + 14);
  return {
    ctx,
    x: (v) => pad + ((v - x0) / (x1 - x0)) * w,
    y: (v) => pad + (1 - (v - y0) / (y1 - y0)) * h,
  };
}

function line(f, xs, ys, color) {
  f.ctx.strokeStyle = color;
  f.ctx.beginPath();
  xs.forEach((x, i) => {
    const px = f.x(x);
    const py = f.y(ys[i]);
    i === 0 ? f.ctx.moveTo(px, py) : f.ctx.lineTo(px, py);
  });
  f.ctx.stroke();
}

function range(values) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

function fail(out, err) {
  out.innerHTML = `<span class="error">${err}</span>`;
}

function drawSpectrum() {
  const nu = +$("sp-nu").value;
  const ratio = +$("sp-ratio").value;
  $("sp-nu-v").textContent = nu.toFixed(2);
  $("sp-ratio-v").textContent = ratio.toFixed(2);
  let s;
  try {
    s = JSON.parse(spectrum(401, nu, ratio));
  } catch (e) {
    return fail($("sp-out"), e);
  }
  // energy against participation ratio, lowest 60 levels
  const n = Math.min(60, s.eigenvalues.length);
  const e = s.eigenvalues.slice(0, n);
  const r = s.participation.slice(0, n);
  const f = frame($("sp-levels"), [0, Math.max(...r) * 1.05], range(e));
  e.forEach((ei, j) => {
    f.ctx.fillStyle = s.bound[j] ? "#c22" : "#36c";
    f.ctx.beginPath();
    f.ctx.arc(f.x(r[j]), f.y(ei), 3, 0, 2 * Math.PI);
    f.ctx.fill();
  });
  line(f, [0, Math.max(...r) * 1.05], [-2, -2], "#aaa");

  const half = (s.sites - 1) / 2;
  const sites = Array.from({ length: 121 }, (_, i) => i - 60);
  const pick = (arr) => sites.map((m) => arr[m + half]);
  const g = frame($("sp-states"), [-60, 60], [-1, 1]);
  const depth = Math.max(...s.potential.map(Math.abs)) || 1;
  line(g, sites, pick(s.potential).map((v) => v / depth), "#888");
  const colors = ["#c22", "#282", "#a5c", "#e80"];
  s.bound_states.forEach((phi, j) => {
    const p = pick(phi);
    const scale = Math.max(...p.map(Math.abs)) || 1;
    line(g, sites, p.map((v) => v / scale), colors[j % colors.length]);
  });
  $("sp-out").textContent =
    `bound levels: ${s.bound_count}   lowest E = ${s.eigenvalues[0].toFixed(5)} κ   ` +
    `R = ${s.participation[0].toFixed(2)}`;
}

function drawBoost() {
  const v = +$("bo-v").value;
  const nu = +$("bo-nu").value;
  $("bo-v-v").textContent = v.toFixed(2);
  let b;
  try {
    b = JSON.parse(boost(v, nu, 401));
  } catch (e) {
    return fail($("bo-out"), e);
  }
  const f = frame($("bo-plot"), [-Math.PI, Math.PI], range([...b.energy, ...b.w]));
  line(f, b.k, b.energy, "#36c");
  line(f, b.k, b.w, "#c22");
  for (const e of b.extrema) {
    f.ctx.fillStyle = e.kind === "min" ? "#c22" : "#222";
    f.ctx.beginPath();
    f.ctx.arc(f.x(e.k), f.y(e.w), 4, 0, 2 * Math.PI);
    f.ctx.fill();
  }
  const fmt = (x) => (x === null ? "n/a" : typeof x === "string" ? x : x.toFixed(4));
  $("bo-out").textContent =
    `qa = ${fmt(b.qa)}   m*/m = ${fmt(b.mass_ratio)}   ν* = ${fmt(b.nu_star)}   ` +
    `predicted bound states: ${b.predicted_bound_count ?? "n/a"}   (blue E, red W)`;
}

let sim = null;
let running = false;

function resetSim() {
  running = false;
  $("dr-run").textContent = "Start";
  if (sim) sim.free();
  sim = null;
  try {
    sim = new Simulation(+$("dr-nu").value, +$("dr-v").value, +$("dr-mode").value, $("dr-boost").checked);
  } catch (e) {
    return fail($("dr-out"), e);
  }
  drawSim();
}

function drawSim() {
  if (!sim) return;
  const half = sim.halfWidth();
  const sites = Array.from({ length: 2 * half + 1 }, (_, i) => i - half);
  const rho = sim.density();
  const v = sim.potential();
  const peak = Math.max(...rho, 1e-12);
  const depth = Math.max(...v.map(Math.abs)) || 1;
  const f = frame($("dr-plot"), [-half, half], [-1, 1]);
  line(f, sites, Array.from(v, (x) => x / depth), "#888");
  line(f, sites, Array.from(rho, (x) => x / peak), "#36c");
  const c = sim.wellCenter();
  line(f, [c - 30, c - 30], [-1, 1], "#ddd");
  line(f, [c + 30, c + 30], [-1, 1], "#ddd");
  const note = sim.modeAvailable() ? "" : "   (requested mode is not bound in the ν* well)";
  $("dr-out").textContent =
    `κt = ${sim.time().toFixed(2)}   fraction within ±30 of the well = ` +
    `${sim.localizedFraction().toFixed(4)}   norm = ${sim.norm().toFixed(10)}${note}`;
}

function tick() {
  if (running && sim) {
    try {
      sim.advance(20);
    } catch (e) {
      running = false;
      fail($("dr-out"), e);
    }
    drawSim();
    if (Math.abs(sim.wellCenter()) > sim.halfWidth() - 30) {
      running = false;
      $("dr-run").textContent = "Start";
    }
  }
  requestAnimationFrame(tick);
}

await init();
for (const id of ["sp-nu", "sp-ratio"]) $(id).addEventListener("input", drawSpectrum);
for (const id of ["bo-v", "bo-nu"]) $(id).addEventListener("input", drawBoost);
for (const id of ["dr-nu", "dr-v", "dr-mode", "dr-boost"]) $(id).addEventListener("change", resetSim);
$("dr-reset").addEventListener("click", resetSim);
$("dr-run").addEventListener("click", () => {
  running = !running;
  $("dr-run").textContent = running ? "Pause" : "Start";
});
drawSpectrum();
drawBoost();
resetSim();
requestAnimationFrame(tick);
