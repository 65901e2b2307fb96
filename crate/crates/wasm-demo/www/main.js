import init, { theta_curve, optimize, support_profile } from "./pkg/symwit_wasm.js";

const $ = (id) => document.getElementById(id);

function fields(form) {
  const data = new FormData(form);
  return Object.fromEntries([...form.elements].filter((e) => e.name).map((e) =>
    [e.name, e.type === "checkbox" ? e.checked : e.type === "number" ? Number(data.get(e.name)) : data.get(e.name)]));
}

function report(el, fn) {
  el.classList.remove("error");
  try {
    return fn();
  } catch (e) {
    el.classList.add("error");
    el.textContent = String(e.message ?? e);
  }
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
}

function plotCurve(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  axes(ctx, w, h, pad);
  const finite = ys.filter((y) => y !== null);
  const lo = Math.min(0, ...finite), hi = Math.max(0, ...finite);
  const sx = (x) => pad + (x / xs[xs.length - 1]) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - lo) / (hi - lo || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath(); ctx.moveTo(pad, sy(0)); ctx.lineTo(w - pad, sy(0)); ctx.stroke();
  ctx.strokeStyle = "#1565c0";
  ctx.beginPath();
  let pen = false;
  xs.forEach((x, i) => {
    if (ys[i] === null) { pen = false; return; }
    pen ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]));
    pen = true;
  });
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.fillText(hi.toFixed(3), 2, pad);
  ctx.fillText(lo.toFixed(3), 2, h - pad);
  ctx.fillText("0", pad, h - 10);
  ctx.fillText("pi/2", w - pad - 20, h - 10);
}

function plotSupport(canvas, result) {
  // protruding directions on an equal-area map: azimuth across, z down
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  axes(ctx, w, h, pad);
  const peak = Math.max(1e-12, ...result.protrusions.map((p) => p.excess));
  for (const p of result.protrusions) {
    const [x, y, z] = p.direction;
    const u = pad + ((Math.atan2(y, x) + Math.PI) / (2 * Math.PI)) * (w - 2 * pad);
    const v = pad + ((1 - z) / 2) * (h - 2 * pad);
    ctx.fillStyle = `rgba(198, 40, 40, ${0.2 + 0.8 * p.excess / peak})`;
    ctx.beginPath(); ctx.arc(u, v, 3, 0, 2 * Math.PI); ctx.fill();
  }
  ctx.fillStyle = "#444";
  ctx.fillText("azimuth of (alpha/2, beta, gamma/2)", w / 2 - 90, h - 10);
}

await init();

$("curve-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const f = fields(ev.target);
  report($("curve-note"), () => {
    const r = JSON.parse(theta_curve(f.family, f.n, f.x, f.alpha, f.beta, f.gamma, 400));
    plotCurve($("curve-plot"), r.theta, r.value);
    const neg = r.theta.filter((_, i) => r.value[i] !== null && r.value[i] < 0);
    $("curve-note").textContent = neg.length
      ? `negative on about [${neg[0].toFixed(4)}, ${neg[neg.length - 1].toFixed(4)}]`
      : "no detection on this grid";
  });
});

$("opt-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const f = fields(ev.target);
  $("opt-out").textContent = "optimizing...";
  setTimeout(() => report($("opt-out"), () => {
    $("opt-out").textContent = JSON.stringify(JSON.parse(optimize(f.family, f.n, f.x, f.general)), null, 2);
  }), 0);
});

$("support-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const f = fields(ev.target);
  report($("support-note"), () => {
    const r = JSON.parse(support_profile(f.n, f.theta, f.directions));
    plotSupport($("support-plot"), r);
    $("support-note").textContent = `${r.protrusions.length} of ${r.directions} directions protrude ` +
      `(largest excess ${r.max_excess.toExponential(3)}, ${r.vertices} polytope vertices)`;
  });
});

$("curve-form").requestSubmit();
