import init, { lcsLengths, chunkPlan, triadBicoherence } from "./pkg/codecid_wasm.js";

const $ = (id) => document.getElementById(id);

function show(el, text, isError = false) {
  el.textContent = text;
  el.classList.toggle("err", isError);
}

function runLcs() {
  try {
    const r = JSON.parse(lcsLengths($("lcs-a").value, $("lcs-b").value));
    show($("lcs-out"), `substring ${r.substring}   subsequence ${r.subsequence}`);
  } catch (e) {
    show($("lcs-out"), String(e), true);
  }
}

function runChunks() {
  const canvas = $("ck-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let plan;
  try {
    plan = JSON.parse(chunkPlan(+$("ck-packet").value, +$("ck-chunk").value, +$("ck-overlap").value));
  } catch (e) {
    show($("ck-out"), String(e), true);
    return;
  }
  show(
    $("ck-out"),
    `${plan.offsets.length} chunks, stride ${plan.stride}\n` +
      `DP cells: full ${plan.full_cells}, overlapped ${plan.overlapped_cells}, ratio ${plan.ratio.toFixed(2)}`
  );
  const scale = (canvas.width - 20) / plan.packet_len;
  ctx.fillStyle = "#ddd";
  ctx.fillRect(10, 8, plan.packet_len * scale, 14);
  const rows = Math.min(plan.offsets.length, 2);
  const lane = (canvas.height - 40) / Math.max(plan.offsets.length / rows, 1);
  plan.offsets.forEach((off, i) => {
    const y = 32 + Math.floor(i / rows) * lane + (i % rows) * (lane / rows);
    ctx.fillStyle = i % 2 ? "#4a7bd0" : "#d07a4a";
    ctx.fillRect(10 + off * scale, y, Math.max(plan.chunk_len * scale, 1), Math.max(lane / rows - 1, 1));
  });
}

function heat(v) {
  // dark blue → yellow
  const t = Math.max(0, Math.min(1, v));
  const r = Math.round(255 * Math.min(1, 2 * t));
  const g = Math.round(255 * t);
  const b = Math.round(160 * (1 - t));
  return `rgb(${r},${g},${b})`;
}

function runBicoherence() {
  const canvas = $("bc-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let m;
  try {
    m = JSON.parse(
      triadBicoherence($("bc-coupled").checked, 128, +$("bc-nseg").value, +$("bc-f1").value, +$("bc-f2").value, +$("bc-seed").value)
    );
  } catch (e) {
    show($("bc-out"), String(e), true);
    return;
  }
  const [p1, p2, pb] = m.peak;
  show($("bc-out"), `mean b ${m.mean.toFixed(4)}   peak b(${p1}, ${p2}) = ${pb.toFixed(4)}`);
  const n = m.nyquist;
  const cell = canvas.width / n;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = m.grid[i * n + j];
      if (v < 0) continue;
      ctx.fillStyle = heat(v);
      // f1 along x, f2 upward
      ctx.fillRect(i * cell, canvas.height - (j + 1) * cell, Math.ceil(cell), Math.ceil(cell));
    }
  }
}

await init();
for (const id of ["lcs-a", "lcs-b"]) $(id).addEventListener("input", runLcs);
for (const id of ["ck-packet", "ck-chunk", "ck-overlap"]) $(id).addEventListener("input", runChunks);
for (const id of ["bc-coupled", "bc-f1", "bc-f2", "bc-nseg", "bc-seed"]) $(id).addEventListener("input", runBicoherence);
runLcs();
runChunks();
runBicoherence();
