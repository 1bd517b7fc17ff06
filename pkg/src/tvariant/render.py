"""Text, DOT and JSON renderings of regular egg-boxes.

Rows are kernels, columns images.  The overlays mark the rows whose kernel
coarsens kernel(theta) (where theta.a lives) and the columns inside
image(theta) (where a.theta lives).
"""
from __future__ import annotations

import json

from . import engine
from .variant import VariantContext, reg_eggbox, reg_semigroup

__all__ = ["overlays", "eggboxes", "eggbox_json", "eggbox_text", "eggbox_dot"]


def overlays(box: engine.EggBox, ctx: VariantContext) -> dict:
    return {
        "u_gamma_rows": [str(r) for r in box.rows if ctx.kernel.refines(r)],
        "u_delta_cols": [str(c) for c in box.cols if c <= ctx.image],
    }


def eggboxes(ctx: VariantContext, rank: int | None = None) -> list[tuple[int, engine.EggBox]]:
    S = reg_semigroup(ctx)
    G = engine.green_classes(S)
    ranks = sorted({a.rank for a in S.elements}, reverse=True) if rank is None else [rank]
    return [(k, reg_eggbox(ctx, k, S, G)) for k in ranks]


def eggbox_json(ctx: VariantContext, boxes) -> dict:
    return {"theta": str(ctx.theta), "n": ctx.n,
            "d_classes": [{"rank": k, **box.to_json(), **overlays(box, ctx)} for k, box in boxes]}


def eggbox_text(ctx: VariantContext, boxes) -> str:
    out = []
    for k, box in boxes:
        ov = overlays(box, ctx)
        rows, cols = box.shape
        out.append(f"rank {k}: {rows} x {cols}, |H| = {','.join(map(str, sorted(box.hsizes())))}"
                   f"  (* group, G row kernel >= kernel(theta), D column inside image(theta))")
        cells = [[" ".join(f"({w})" for w in box.cells[i][j]) + (" *" if box.groups[i][j] else "")
                  for j in range(cols)] for i in range(rows)]
        heads = [("D " if str(c) in ov["u_delta_cols"] else "") + str(c) for c in box.cols]
        labels = [("G " if str(r) in ov["u_gamma_rows"] else "") + str(r) for r in box.rows]
        lw = max(len(s) for s in labels)
        widths = [max(len(heads[j]), *(len(cells[i][j]) for i in range(rows))) for j in range(cols)]
        out.append(" " * lw + " | " + " | ".join(h.ljust(w) for h, w in zip(heads, widths)))
        out.append("-" * (lw + 1) + "+" + "+".join("-" * (w + 2) for w in widths))
        for i in range(rows):
            out.append(labels[i].ljust(lw) + " | " + " | ".join(c.ljust(w) for c, w in zip(cells[i], widths)))
        out.append("")
    return "\n".join(out).rstrip() + "\n"


def _q(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def eggbox_dot(ctx: VariantContext, boxes) -> str:
    """One cluster per D-class, one box node per H-class; group H-classes filled."""
    lines = [f"graph {_q('eggbox ' + str(ctx.theta))} {{", "  node [shape=box, fontname=monospace];"]
    for k, box in boxes:
        ov = overlays(box, ctx)
        lines.append(f"  subgraph cluster_rank{k} {{")
        lines.append(f"    label={_q(f'rank {k}')};")
        for i, r in enumerate(box.rows):
            for j, c in enumerate(box.cols):
                words = " ".join(str(w) for w in box.cells[i][j])
                tags = []
                if str(r) in ov["u_gamma_rows"]:
                    tags.append("UG")
                if str(c) in ov["u_delta_cols"]:
                    tags.append("UD")
                label = f"{r} {c}\\n{words}" + (f"\\n{' '.join(tags)}" if tags else "")
                fill = ', style=filled, fillcolor="#c6dbef"' if box.groups[i][j] else ""
                lines.append(f"    r{k}_{i}_{j} [label={_q(label)}{fill}];")
            # keep each R-class on one line of the layout
            lines.append("    { rank=same; " + " ".join(f"r{k}_{i}_{j};" for j in range(len(box.cols))) + " }")
        for i in range(len(box.rows) - 1):
            lines.append(f"    r{k}_{i}_0 -- r{k}_{i + 1}_0 [style=invis];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
