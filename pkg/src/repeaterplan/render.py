"""SVG map of a plan: hexagons colored by PL tone, repeater dots, service circle."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .plan import Plan


def tone_color(tone: int) -> str:
    hue = (tone * 137.508) % 360
    light = 55 + 15 * (tone % 3)
    return f"hsl({hue:.1f},65%,{light}%)"


def _pt(x, y):
    return f"{x:.3f},{-y:.3f}"


def render_svg(plan: Plan, size: int = 800) -> str:
    tess = plan.tessellation
    extent = max(tess.R, max(abs(v) for c in tess.cells for p in c.vertices() for v in p)) + tess.r
    for aug in plan.augmentations:
        ob = aug.obstacle
        extent = max(extent, abs(ob.center[0]) + ob.radius, abs(ob.center[1]) + ob.radius)
    dot = tess.r * 0.12
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{-extent:.3f} {-extent:.3f} {2 * extent:.3f} {2 * extent:.3f}">',
        f'<title>{plan.mode} plan: {plan.n_repeaters} repeaters, {len(plan.clusters)} clusters</title>',
        '<g id="cells" stroke="#333" stroke-width="0.05">',
    ]
    for cell in tess.cells:
        cluster = plan.cluster_of_cell(cell.repeater_id)
        pts = " ".join(_pt(x, y) for x, y in cell.vertices())
        out.append(
            f'<polygon class="cell" data-id="{cell.repeater_id}" data-cluster="{cluster.id}" '
            f'data-pl="{cluster.pl_tone}" fill="{tone_color(cluster.pl_tone)}" points="{pts}"/>'
        )
    out.append("</g>")
    out.append(
        f'<circle class="service-area" cx="0" cy="0" r="{tess.R:.3f}" fill="none" stroke="#c00" '
        f'stroke-width="0.15"/>'
    )
    out.append('<g id="repeaters" fill="#000">')
    for cell in tess.cells:
        x, y = cell.center
        out.append(f'<circle class="repeater" data-id="{cell.repeater_id}" cx="{x:.3f}" cy="{-y:.3f}" r="{dot:.3f}"/>')
    out.append("</g>")
    if plan.augmentations:
        out.append('<g id="terrain">')
        for aug in plan.augmentations:
            ob = aug.obstacle
            out.append(
                f'<circle class="obstacle" data-case={quoteattr(aug.case_label)} cx="{ob.center[0]:.3f}" '
                f'cy="{-ob.center[1]:.3f}" r="{ob.radius:.3f}" fill="#8b5a2b" fill-opacity="0.35"/>'
            )
            for rep in aug.added_repeaters:
                out.append(
                    f'<circle class="added-repeater" cx="{rep.position[0]:.3f}" cy="{-rep.position[1]:.3f}" '
                    f'r="{dot * 1.5:.3f}" fill="#fff" stroke="#000" stroke-width="0.08"/>'
                )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
