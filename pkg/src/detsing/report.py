"""Deterministic renderings of script runs: text, JSON, TSV and a dual-graph figure."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .polycore import Polynomial
from .resolve import (ModelCheckReport, ScriptReport, SmoothnessReport, TransformResult,
                      format_point)


def _verdict(rep: SmoothnessReport) -> str:
    if rep.verdict == "singular":
        pts = "".join(format_point(p) for p in rep.points)
        return f"singular@{pts}" + ("" if rep.complete else " (+ irrational points)")
    if rep.verdict == "singular-locus-positive-dim":
        return f"singular locus of dimension {rep.singular_dim}"
    return rep.verdict


def smoothness_text(rep: SmoothnessReport) -> str:
    lines = [f"vars         {' '.join(rep.vars)}",
             f"dim          {rep.dim}",
             f"codim        {rep.codim}",
             f"verdict      {_verdict(rep)}",
             f"certificate  {rep.certificate}"]
    for pt, ok in rep.candidates:
        lines.append(f"candidate    {format_point(pt)} {'in singular locus' if ok else 'not singular'}")
    return "\n".join(lines)


def transform_text(res: TransformResult) -> str:
    cp = res.chart
    lines = [f"chart        {cp.chart}",
             f"chart vars   {' '.join(cp.chart_vars)}",
             "equations"]
    lines += [f"  {g}" for g in cp.matrix.entries()]
    if cp.ledger:
        lines.append("eliminated")
        lines += [f"  {v} = {Polynomial.var(cp.vars, v) - g}" for v, g in cp.ledger]
    if cp.saturated_by:
        lines.append("saturated by " + ", ".join(str(f) for f in cp.saturated_by))
    lines.append("generators")
    lines += [f"  {g}" for g in res.generators] or ["  (none)"]
    lines.append(smoothness_text(res.smoothness))
    return "\n".join(lines)


def script_text(rep: ScriptReport) -> str:
    out = [f"script {rep.name}"]
    for s in rep.steps:
        out.append(f"step {s.number}")
        out.append(f"  claim        {s.claim}")
        mark = {1: "ok", -1: "ok (up to sign)", 0: "ok" if s.det_ok else "FAIL"}[s.det_sign]
        out.append(f"  det          {s.determinant}  [{mark}]")
        if s.chain_ok is not None:
            out.append(f"  chain        {s.chain_detail}  [{'ok' if s.chain_ok else 'FAIL'}]")
        for c in s.charts:
            rs = c.transform.smoothness
            gens = ", ".join(str(g) for g in c.transform.generators) or "(none)"
            tail = f" -> step {c.continued_by}" if c.continued_by is not None else ""
            exp = "" if c.expectation_ok is None else (" [ok]" if c.expectation_ok else " [FAIL]")
            out.append(f"  chart {c.label:<6} {gens}  in ({', '.join(rs.vars)}){tail}")
            out.append(f"    {_verdict(rs)}{exp}")
            if c.ledger is not None:
                for inc in c.ledger.pairs:
                    out.append("    " + _incidence_text(inc))
    out.append("dual graph   " + (" ".join(f"{a}-{b}" for a, b in rep.edges) or "(no edges)"))
    if rep.graph_ok is not None:
        out.append(f"expected     {'ok' if rep.graph_ok else 'FAIL'}")
    if rep.failures:
        out.append("FAILED")
        out += [f"  {f}" for f in rep.failures]
    else:
        out.append("PASSED")
    return "\n".join(out) + "\n"


def _incidence_text(inc) -> str:
    if not inc.meets:
        return f"{inc.a} x {inc.b}: disjoint"
    if inc.dim > 0:
        return f"{inc.a} x {inc.b}: meet in dimension {inc.dim}"
    pts = ", ".join(f"{format_point(p)} {'smooth' if s else 'singular'}"
                    for p, s in zip(inc.points, inc.smooth))
    return f"{inc.a} x {inc.b}: {pts}"


def script_json(rep: ScriptReport) -> dict:
    steps = []
    for s in rep.steps:
        charts = []
        for c in s.charts:
            cp = c.transform.chart
            entry = {
                "chart": c.label,
                "vars": list(cp.vars.names),
                "equations": [str(g) for g in cp.matrix.entries()],
                "eliminated": {v: str(g) for v, g in cp.ledger},
                "generators": [str(g) for g in c.transform.generators],
                "smoothness": c.transform.smoothness.to_dict(),
                "expectation_ok": c.expectation_ok,
                "continued_by": c.continued_by,
            }
            if c.ledger is not None:
                entry["divisors"] = {n: [str(g) for g in gs] for n, gs in c.ledger.divisors.items()}
                entry["incidence"] = [
                    {"a": i.a, "b": i.b, "meets": i.meets, "dim": i.dim,
                     "points": [[str(x) for x in p] for p in i.points], "smooth": i.smooth}
                    for i in c.ledger.pairs]
            charts.append(entry)
        steps.append({"step": s.number, "claim": s.claim, "determinant": s.determinant,
                      "det_ok": s.det_ok, "det_sign": s.det_sign, "chain_ok": s.chain_ok,
                      "chain": s.chain_detail, "charts": charts})
    return {
        "script": rep.name,
        "passed": rep.passed,
        "steps": steps,
        "dual_graph": {"vertices": rep.vertices, "edges": [list(e) for e in rep.edges]},
        "graph_ok": rep.graph_ok,
        "failures": [vars(f) for f in rep.failures],
    }


def incidence_tsv(rep: ScriptReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["step", "chart", "a", "b", "meets", "dim", "point", "point_type"])
    for s in rep.steps:
        for c in s.charts:
            if c.ledger is None:
                continue
            for inc in c.ledger.pairs:
                if inc.points:
                    for p, sm in zip(inc.points, inc.smooth):
                        w.writerow([s.number, c.label, inc.a, inc.b, "yes", inc.dim,
                                    format_point(p), "smooth" if sm else "singular"])
                else:
                    w.writerow([s.number, c.label, inc.a, inc.b, "yes" if inc.meets else "no",
                                inc.dim, "", ""])
    return buf.getvalue()


def _layout(vertices: List[str], edges: List[Tuple[str, str]]) -> Dict[str, Tuple[float, float]]:
    # longest path on a row, other vertices hang below their first neighbour
    adj: Dict[str, List[str]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort()

    def far(src):
        dist = {src: 0}
        prev = {src: None}
        queue = [src]
        for u in queue:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    prev[w] = u
                    queue.append(w)
        end = max(sorted(dist), key=lambda v: dist[v])
        return end, prev

    pos: Dict[str, Tuple[float, float]] = {}
    row = 0
    for start in vertices:
        if start in pos:
            continue
        a, _ = far(start)
        b, prev = far(a)
        path = []
        while b is not None:
            path.append(b)
            b = prev[b]
        for k, v in enumerate(path):
            pos[v] = (float(k), -2.0 * row)
        pending = [v for v in path]
        while pending:
            u = pending.pop(0)
            below = 1
            for w in adj[u]:
                if w not in pos:
                    x, y = pos[u]
                    pos[w] = (x + 0.3 * (below - 1), y - 1.0 * below)
                    below += 1
                    pending.append(w)
        row += 1
    return pos


def dual_graph_png(rep: ScriptReport, path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    verts = list(rep.vertices)
    pos = _layout(verts, list(rep.edges))
    fig, ax = plt.subplots(figsize=(max(3.0, 1.2 * len(verts)), 2.6))
    for a, b in rep.edges:
        (x1, y1), (x2, y2) = pos[a], pos[b]
        ax.plot([x1, x2], [y1, y2], color="black", lw=1.2, zorder=1)
    for v in verts:
        x, y = pos[v]
        ax.scatter([x], [y], s=120, facecolor="white", edgecolor="black", zorder=2)
        on_row = y == round(y / 2.0) * 2.0
        ax.annotate(v, (x, y), textcoords="offset points",
                    xytext=(0, 9) if on_row else (9, -4), ha="center" if on_row else "left")
    ax.set_title(f"dual graph: {rep.name}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def write_script_reports(rep: ScriptReport, outdir, stem: Optional[str] = None,
                         figure: bool = True) -> Dict[str, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = stem or rep.name or "script"
    files = {
        "text": outdir / f"{stem}.txt",
        "json": outdir / f"{stem}.json",
        "tsv": outdir / f"{stem}.incidence.tsv",
    }
    files["text"].write_text(script_text(rep))
    files["json"].write_text(json.dumps(script_json(rep), indent=2, sort_keys=True) + "\n")
    files["tsv"].write_text(incidence_tsv(rep))
    if figure and rep.vertices:
        files["png"] = dual_graph_png(rep, outdir / f"{stem}.dual.png")
    return files


def model_check_text(rep: ModelCheckReport) -> str:
    m, n, t = rep.spec
    lines = [f"model M^{t}_{{{m},{n}}}  seed {rep.seed}  trials {rep.trials}"]
    for name in sorted(rep.counts):
        ok, bad = rep.counts[name]
        lines.append(f"  {name:<20} pass {ok:>5}  fail {bad:>3}")
    if rep.minors_dimension is not None:
        lines.append(f"  minors dimension     {rep.minors_dimension} (expected {rep.expected_dimension})")
    lines.append(f"  witness              {rep.witness}")
    lines.append("PASSED" if rep.passed else "FAILED")
    return "\n".join(lines) + "\n"
