"""Newton polygon sketches: SVG files via matplotlib, and ASCII art."""


def render_newton_polygon(polygon, path, title=None):
    """Draw the support, lower hull, and in-range sides to an SVG file.

    Support points are dots, the lower hull is a solid line, and sides
    with slope strictly between -1 and 0 are highlighted with their
    slope annotated.  Returns the path written.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    xs = [j for (j, k) in polygon.support]
    ys = [k for (j, k) in polygon.support]
    ax.scatter(xs, ys, s=36, color="black", zorder=3, label="support")
    if len(polygon.vertices) >= 2:
        hx = [v[0] for v in polygon.vertices]
        hy = [v[1] for v in polygon.vertices]
        ax.plot(hx, hy, color="steelblue", lw=1.5, zorder=2,
                label="lower hull")
    for s in polygon.sides_in_range():
        ax.plot([s.j0, s.j1], [s.k0, s.k1], color="crimson", lw=2.8,
                zorder=4)
        mx, my = (s.j0 + s.j1) / 2, (s.k0 + s.k1) / 2
        ax.annotate(f"slope -{s.b}/{s.c}", (mx, my),
                    textcoords="offset points", xytext=(8, 8),
                    fontsize=9, color="crimson")
    ax.set_xlabel("j  (exponent of y)")
    ax.set_ylabel("k  (exponent of z)")
    ax.set_xticks(range(0, max(xs) + 2))
    ax.set_yticks(range(0, max(ys) + 2))
    ax.set_xlim(-0.5, max(xs) + 1)
    ax.set_ylim(-0.5, max(ys) + 1)
    ax.grid(True, linestyle=":", alpha=0.4)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def ascii_newton_polygon(polygon):
    """Plain-text sketch of the support and hull vertices.

    Hull vertices print as 'o', other support points as '*'.
    """
    support = set(polygon.support)
    vertices = set(polygon.vertices)
    jmax = max(j for j, _ in support)
    kmax = max(k for _, k in support)
    width = len(str(kmax))
    lines = []
    for k in range(kmax, -1, -1):
        cells = []
        for j in range(jmax + 1):
            if (j, k) in vertices:
                cells.append("o")
            elif (j, k) in support:
                cells.append("*")
            else:
                cells.append(".")
        lines.append(f"{k:>{width}} | " + " ".join(cells))
    lines.append(" " * width + " +-" + "-" * (2 * jmax + 1))
    labels = " ".join(str(j)[-1] for j in range(jmax + 1))
    lines.append(" " * width + "   " + labels)
    return "\n".join(lines)
