import init, { interferenceCurve, vanishingReport, sensitivityRatios } from "./pkg/born_hierarchy_web.js";

const TAU = 2 * Math.PI;

function plot(canvas, xs, ys, { logY = false, points = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  const ty = logY ? ys.map(Math.log10) : ys;
  let lo = Math.min(...ty), hi = Math.max(...ty);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - lo) / (hi - lo)) * (h - 2 * pad);

  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  if (!logY && lo < 0 && hi > 0) {
    ctx.beginPath();
    ctx.moveTo(pad, sy(0));
    ctx.lineTo(w - pad, sy(0));
    ctx.stroke();
  }
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  const fmt = (v) => (logY ? `1e${v.toFixed(1)}` : v.toPrecision(3));
  ctx.fillText(fmt(hi), 2, pad + 4);
  ctx.fillText(fmt(lo), 2, h - pad);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 16);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 16);

  ctx.strokeStyle = "#1f5fbf";
  ctx.fillStyle = "#1f5fbf";
  ctx.lineWidth = 2;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ty[i])) : ctx.moveTo(sx(x), sy(ty[i]))));
  ctx.stroke();
  if (points) xs.forEach((x, i) => ctx.fillRect(sx(x) - 3, sy(ty[i]) - 3, 6, 6));
}

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

function guard(out, fn) {
  try {
    out.classList.remove("error");
    fn();
  } catch (err) {
    out.classList.add("error");
    out.textContent = String(err.message ?? err);
  }
}

function drawCurve() {
  const form = document.getElementById("curve-form");
  const status = document.getElementById("curve-status");
  const f = fields(form);
  guard(status, () => {
    const flat = interferenceCurve(+f.m, +f.n, f.preset, 0, TAU, 257, f.normalize === "on");
    const xs = [], ys = [];
    for (let i = 0; i < flat.length; i += 2) { xs.push(flat[i]); ys.push(flat[i + 1]); }
    plot(document.getElementById("curve-canvas"), xs, ys);
    const max = Math.max(...ys.map(Math.abs));
    const expected = +f.n >= 2 * +f.m + 1 ? "expected to vanish" : "non-zero in general";
    status.textContent = `max |I| = ${max.toExponential(3)} over δ ∈ [0, 2π] (${expected})`;
  });
}

function runVanish() {
  const f = fields(document.getElementById("vanish-form"));
  const out = document.getElementById("vanish-output");
  guard(out, () => {
    out.textContent = JSON.stringify(JSON.parse(vanishingReport(+f.m, +f.n, +f.trials, +f.seed)), null, 2);
  });
}

function runRatios() {
  const f = fields(document.getElementById("ratio-form"));
  const out = document.getElementById("ratio-output");
  guard(out, () => {
    const ratios = Array.from(sensitivityRatios(+f.mmax));
    const ms = ratios.map((_, i) => i + 1);
    plot(document.getElementById("ratio-canvas"), ms, ratios, { logY: true, points: true });
    out.textContent = ms.map((m, i) => `M=${m}  ratio=${ratios[i].toFixed(1)}`).join("\n");
  });
}

function bind(id, fn) {
  document.getElementById(id).addEventListener("submit", (e) => {
    e.preventDefault();
    fn();
  });
}

await init();
bind("curve-form", drawCurve);
bind("vanish-form", runVanish);
bind("ratio-form", runRatios);
drawCurve();
runVanish();
runRatios();
