import init, { compare, families, complex_roots } from "./pkg/lame_spectral_wasm.js";

const FAMILY_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

function num(v) {
  const x = Number(v);
  if (!Number.isFinite(x)) throw new Error(`not a number: ${v}`);
  return x;
}

// "a+bi", "a-bi", "bi" or "a"
function parseComplex(s) {
  const t = s.replace(/\s+/g, "").toLowerCase();
  const bad = () => new Error(`cannot parse complex number: ${s}`);
  if (t === "") throw bad();
  if (!t.endsWith("i")) {
    const re = Number(t);
    if (!Number.isFinite(re)) throw bad();
    return [re, 0];
  }
  const body = t.slice(0, -1);
  let cut = 0;
  for (let k = body.length - 1; k > 0; k--) {
    if ((body[k] === "+" || body[k] === "-") && body[k - 1] !== "e") {
      cut = k;
      break;
    }
  }
  const reText = body.slice(0, cut);
  const imText = body.slice(cut);
  const re = reText === "" ? 0 : Number(reText);
  const im = imText === "" || imText === "+" ? 1 : imText === "-" ? -1 : Number(imText);
  if (!Number.isFinite(re) || !Number.isFinite(im)) throw bad();
  return [re, im];
}

function frame(canvas, xmin, xmax, ymin, ymax, pad = 36) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const sx = (x) => pad + ((x - xmin) / (xmax - xmin)) * w;
  const sy = (y) => canvas.height - pad - ((y - ymin) / (ymax - ymin)) * h;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "12px sans-serif";
  ctx.fillText(xmin.toPrecision(3), pad, canvas.height - pad + 16);
  ctx.fillText(xmax.toPrecision(3), pad + w - 30, canvas.height - pad + 16);
  ctx.fillText(ymax.toPrecision(3), 2, pad + 4);
  return { ctx, sx, sy };
}

function drawComparison(canvas, res) {
  const edges = res.bin_edges;
  const heights = res.heights;
  const grid = res.grid;
  const dens = res.density;
  const top = Math.min(Math.max(...heights, ...dens.filter((_, i) => i > 2 && i < dens.length - 3)) * 1.1, 4 * Math.max(...heights));
  const { ctx, sx, sy } = frame(canvas, edges[0], edges[edges.length - 1], 0, top);
  ctx.fillStyle = "rgba(31, 119, 180, 0.35)";
  heights.forEach((hgt, k) => {
    const x0 = sx(edges[k]);
    const x1 = sx(edges[k + 1]);
    ctx.fillRect(x0, sy(hgt), x1 - x0 - 1, sy(0) - sy(hgt));
  });
  ctx.strokeStyle = "#d62728";
  ctx.lineWidth = 2;
  ctx.beginPath();
  grid.forEach((s, k) => {
    const y = sy(Math.min(dens[k], top));
    if (k === 0) ctx.moveTo(sx(s), y);
    else ctx.lineTo(sx(s), y);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawFamilies(canvas, pts, lo, hi) {
  const { ctx, sx } = frame(canvas, lo, hi, 0, 1, 24);
  for (let k = 0; k < pts.length; k += 2) {
    const type = pts[k + 1];
    const y = 30 + (type - 1) * 28;
    ctx.fillStyle = FAMILY_COLORS[type - 1];
    ctx.beginPath();
    ctx.arc(sx(pts[k]), y, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.font = "12px sans-serif";
  for (let type = 1; type <= 4; type++) {
    ctx.fillStyle = FAMILY_COLORS[type - 1];
    ctx.fillText(`type ${type}`, canvas.width - 70, 34 + (type - 1) * 28);
  }
}

function drawScatter(canvas, pts, roots) {
  const xs = [];
  const ys = [];
  for (let k = 0; k < pts.length; k += 2) {
    xs.push(pts[k]);
    ys.push(pts[k + 1]);
  }
  roots.forEach(([re, im]) => {
    xs.push(re);
    ys.push(im);
  });
  const cx = (Math.max(...xs) + Math.min(...xs)) / 2;
  const cy = (Math.max(...ys) + Math.min(...ys)) / 2;
  const half = 0.55 * Math.max(Math.max(...xs) - Math.min(...xs), Math.max(...ys) - Math.min(...ys), 1e-6);
  const aspect = canvas.width / canvas.height;
  const { ctx, sx, sy } = frame(canvas, cx - half * aspect, cx + half * aspect, cy - half, cy + half);
  ctx.fillStyle = "#1f77b4";
  for (let k = 0; k < pts.length; k += 2) {
    ctx.beginPath();
    ctx.arc(sx(pts[k]), sy(pts[k + 1]), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = "#d62728";
  roots.forEach(([re, im]) => ctx.fillRect(sx(re) - 4, sy(im) - 4, 8, 8));
}

function wire(formId, statusId, run) {
  const form = document.getElementById(formId);
  const status = document.getElementById(statusId);
  const go = () => {
    status.classList.remove("error");
    try {
      status.textContent = run(fields(form));
    } catch (e) {
      status.textContent = String(e.message ?? e);
      status.classList.add("error");
    }
  };
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    go();
  });
  go();
}

await init();

wire("compare-form", "compare-status", (f) => {
  const t0 = performance.now();
  const res = compare(num(f.e1), num(f.e2), num(f.e3), num(f.a1), num(f.a2), num(f.a3), num(f.m), num(f.bins));
  drawComparison(document.getElementById("compare-plot"), res);
  const ms = (performance.now() - t0).toFixed(0);
  return `${res.roots.length} roots, Kolmogorov-Smirnov distance ${res.ks.toExponential(3)} (${ms} ms)`;
});

wire("family-form", "family-status", (f) => {
  const e = [num(f.e1), num(f.e2), num(f.e3)];
  const pts = families(e[0], e[1], e[2], num(f.n));
  drawFamilies(document.getElementById("family-plot"), pts, Math.min(...e), Math.max(...e));
  return `${pts.length / 2} values of t = -E / (n(n+1)) in total`;
});

wire("complex-form", "complex-status", (f) => {
  const roots = [parseComplex(f.e1), parseComplex(f.e2), parseComplex(f.e3)];
  const out = complex_roots(...roots.flat(), num(f.n));
  const thickness = out[out.length - 1];
  drawScatter(document.getElementById("complex-plot"), out.slice(0, -1), roots);
  return `${(out.length - 1) / 2} roots, thickness ${thickness.toExponential(3)}`;
});
