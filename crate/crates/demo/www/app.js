import init, { Explorer } from "./pkg/relcom_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
let ex = null;
let highlight = null;

function fail(e) {
  $("out").innerHTML = `<span class="err">${e.message || e}</span>`;
}

function load(explorer) {
  ex = explorer;
  highlight = null;
  const s = JSON.parse(ex.summary());
  $("q").innerHTML = s.labels.map((l) => `<option>${l}</option>`).join("");
  $("end").value = s.snapshots - 1;
  $("info").textContent = `${s.labels.length} vertices, ${s.snapshots} snapshots, k_max per snapshot ${s.k_max.join(" ")}`;
  $("out").textContent = "";
  $("tree").textContent = "";
  draw();
}

function draw() {
  const s = JSON.parse(ex.summary());
  const t = Math.min(num("t"), s.snapshots - 1);
  const g = JSON.parse(ex.snapshot_edges(t));
  const n = s.labels.length, r = 170, cx = 260, cy = 210;
  const pos = {};
  s.labels.forEach((l, i) => {
    const a = (2 * Math.PI * i) / n - Math.PI / 2;
    pos[l] = [cx + r * Math.cos(a), cy + r * Math.sin(a)];
  });
  const inC = new Set(highlight ? highlight.vertices : []);
  const theta = num("theta");
  let svg = "";
  for (const e of g.edges) {
    const [x1, y1] = pos[e.u], [x2, y2] = pos[e.v];
    const on = inC.has(e.u) && inC.has(e.v) && e.w >= theta;
    svg += `<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="${on ? "#d33" : "#999"}"
      stroke-width="${0.5 + 3 * e.w}" opacity="${e.w >= theta ? 1 : 0.35}"><title>${e.u}-${e.v} ${e.w}</title></line>`;
  }
  s.labels.forEach((l, i) => {
    const [x, y] = pos[l];
    svg += `<circle cx="${x}" cy="${y}" r="11" fill="${inC.has(l) ? "#d33" : "#fff"}" stroke="#333"><title>core ${g.core[i]}</title></circle>`;
    svg += `<text x="${x}" y="${y + 4}" text-anchor="middle" font-size="10">${l}</text>`;
  });
  svg += `<text x="8" y="16">snapshot ${t}</text>`;
  $("graph").innerHTML = svg;
}

function query() {
  const res = JSON.parse(ex.query($("q").value, num("k"), num("theta"), num("start"), num("end"), num("alpha"), $("engine").value));
  const c = res.community;
  highlight = c;
  if (c) {
    $("t").value = c.interval[0];
  }
  $("out").textContent = c
    ? `{${c.vertices.join(", ")}} over [${c.interval[0]}, ${c.interval[1]}]  size ${c.size}  duration ${c.duration}  score ${c.score.toFixed(4)}\n` +
      `core extractions ${res.stats.core_extractions}, pruned by density ${res.stats.pruned_density}, by bound ${res.stats.pruned_bound}`
    : "no community";
  draw();
}

function sweep() {
  const alphas = new Float64Array([0, 0.5, 1, 2, 4, 6]);
  const rows = JSON.parse(ex.alpha_sweep($("q").value, num("k"), num("theta"), num("start"), num("end"), alphas));
  let html = "<table><tr><th>&alpha;</th><th>community</th><th>interval</th><th>size</th><th>duration</th><th>score</th></tr>";
  for (const { alpha, community: c } of rows) {
    html += c
      ? `<tr><td>${alpha}</td><td>${c.vertices.join(" ")}</td><td>${c.interval.join("-")}</td><td>${c.size}</td><td>${c.duration}</td><td>${c.score.toFixed(4)}</td></tr>`
      : `<tr><td>${alpha}</td><td colspan="5">none</td></tr>`;
  }
  $("out").innerHTML = html + "</table>";
}

function tree() {
  const nodes = JSON.parse(ex.tree(num("tk"), num("t")));
  if (!nodes.length) {
    $("tree").textContent = "no vertex has that core number";
    draw();
    return;
  }
  const kids = new Map();
  nodes.forEach((n) => {
    const p = n.parent === null ? -1 : n.parent;
    if (!kids.has(p)) kids.set(p, []);
    kids.get(p).push(n);
  });
  const lines = [];
  const walk = (n, depth) => {
    lines.push(`${"  ".repeat(depth)}θ ≥ ${n.theta.toFixed(2)}  {${n.vertices.join(", ")}}`);
    (kids.get(n.id) || []).forEach((c) => walk(c, depth + 1));
  };
  (kids.get(-1) || []).forEach((r) => walk(r, 0));
  $("tree").textContent = lines.join("\n");
  draw();
}

const guard = (f) => () => {
  try {
    f();
  } catch (e) {
    fail(e);
  }
};

await init();
load(new Explorer());
$("fixture").onclick = guard(() => load(new Explorer()));
$("random").onclick = guard(() => load(Explorer.random(num("seed"), num("nv"), num("nt"))));
$("run").onclick = guard(query);
$("sweep").onclick = guard(sweep);
$("showtree").onclick = guard(tree);
$("t").onchange = guard(draw);
$("theta").onchange = guard(draw);
