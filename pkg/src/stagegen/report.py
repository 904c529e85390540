"""CSV and SVG output.

CSVs are the record; charts are conveniences derived from the same rows.
Column orders are stable and documented here:

* bench rows:  workload,treatment,size,ns_per_value,binds_per_value,samples_per_value,flagged
* etna rows:   task,seed,treatment,found,ns,values_tried
* diff rows:   workload,size,seeds,divergences
* prng rows:   core,op,ns_per_call

Timing-valued columns (ns_per_value, ns) vary run to run; all other columns
are byte-stable for identical configurations and seeds.

SVGs are written directly -- no plotting dependency.
"""

import math

BENCH_HEADER = "workload,treatment,size,ns_per_value,binds_per_value,samples_per_value,flagged"
ETNA_HEADER = "task,seed,treatment,found,ns,values_tried"
DIFF_HEADER = "workload,size,seeds,divergences"
PRNG_HEADER = "core,op,ns_per_call"


def _num(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return "%.2f" % x
    return str(x)


def bench_csv(rows):
    out = [BENCH_HEADER]
    for r in rows:
        out.append(",".join([
            r.workload, r.treatment, str(r.size), _num(r.ns_per_value),
            _num(r.binds_per_value), _num(r.samples_per_value),
            "1" if r.flagged else "0"]))
    return "\n".join(out) + "\n"


def etna_csv(outcomes):
    out = [ETNA_HEADER]
    for o in outcomes:
        out.append(",".join([
            o.task.id, str(o.seed_id), o.treatment,
            "1" if o.found else "0", str(o.ns), str(o.values_tried)]))
    return "\n".join(out) + "\n"


def diff_csv(reports):
    out = [DIFF_HEADER]
    for rep in reports:
        for size in rep.sizes:
            n_div = sum(1 for d in rep.divergences if d.size == size)
            out.append(",".join([rep.workload, str(size),
                                 str(rep.n_seeds), str(n_div)]))
    return "\n".join(out) + "\n"


def prng_csv(rows):
    out = [PRNG_HEADER]
    for core, op, ns in rows:
        out.append("%s,%s,%s" % (core, op, _num(ns)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# minimal SVG emission

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 60


def _esc(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


class _Svg:
    def __init__(self, title):
        self.parts = [
            '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
            'font-family="sans-serif" font-size="12">' % (_W, _H),
            '<rect width="%d" height="%d" fill="white"/>' % (_W, _H),
            '<text x="%d" y="20" font-size="14" text-anchor="middle">%s</text>'
            % (_W // 2, _esc(title)),
        ]

    def line(self, x1, y1, x2, y2, color="#999", width=1):
        self.parts.append(
            '<line x1="%.1f" y1="%.1f" x2="%.1f" y2="%.1f" stroke="%s" '
            'stroke-width="%s"/>' % (x1, y1, x2, y2, color, width))

    def poly(self, pts, color):
        coords = " ".join("%.1f,%.1f" % p for p in pts)
        self.parts.append(
            '<polyline points="%s" fill="none" stroke="%s" stroke-width="2"/>'
            % (coords, color))

    def circle(self, x, y, color, r=3):
        self.parts.append('<circle cx="%.1f" cy="%.1f" r="%d" fill="%s"/>'
                          % (x, y, r, color))

    def rect(self, x, y, w, h, color):
        self.parts.append(
            '<rect x="%.1f" y="%.1f" width="%.1f" height="%.1f" fill="%s"/>'
            % (x, y, w, h, color))

    def text(self, x, y, s, anchor="middle", size=11, rotate=None):
        extra = ' transform="rotate(%d %.1f %.1f)"' % (rotate, x, y) if rotate else ""
        self.parts.append(
            '<text x="%.1f" y="%.1f" text-anchor="%s" font-size="%d"%s>%s</text>'
            % (x, y, anchor, size, extra, _esc(s)))

    def finish(self):
        self.parts.append("</svg>")
        return "\n".join(self.parts)


def _log_ticks(lo, hi):
    lo_e = int(math.floor(math.log10(lo)))
    hi_e = int(math.ceil(math.log10(hi)))
    return [10 ** e for e in range(lo_e, hi_e + 1)]


def _fmt_tick(v):
    if v >= 1e9:
        return "%gG" % (v / 1e9)
    if v >= 1e6:
        return "%gM" % (v / 1e6)
    if v >= 1e3:
        return "%gk" % (v / 1e3)
    return "%g" % v


def line_chart_loglog(title, series, xlabel, ylabel):
    """series: {name: [(x, y), ...]} with positive x and y; log-log axes."""
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x1 = x0 * 10
    if y0 == y1:
        y1 = y0 * 10

    def px(x):
        return _ML + (math.log10(x) - math.log10(x0)) / \
            (math.log10(x1) - math.log10(x0)) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (math.log10(y) - math.log10(y0)) / \
            (math.log10(y1) - math.log10(y0)) * (_H - _MT - _MB)

    svg = _Svg(title)
    svg.line(_ML, _H - _MB, _W - _MR, _H - _MB)
    svg.line(_ML, _MT, _ML, _H - _MB)
    for t in _log_ticks(x0, x1):
        if x0 <= t <= x1:
            svg.line(px(t), _H - _MB, px(t), _H - _MB + 4)
            svg.text(px(t), _H - _MB + 18, _fmt_tick(t))
    for t in _log_ticks(y0, y1):
        if y0 <= t <= y1:
            svg.line(_ML - 4, py(t), _ML, py(t))
            svg.text(_ML - 8, py(t) + 4, _fmt_tick(t), anchor="end")
    svg.text((_W + _ML - _MR) / 2, _H - 15, xlabel)
    svg.text(18, (_H - _MB + _MT) / 2, ylabel, rotate=-90)
    for i, (name, pts) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = sorted(pts)
        svg.poly([(px(x), py(y)) for x, y in pts], color)
        for x, y in pts:
            svg.circle(px(x), py(y), color)
        svg.text(_W - _MR - 4, _MT + 14 + 14 * i, name, anchor="end",
                 size=11)
        svg.line(_W - _MR - 90, _MT + 10 + 14 * i, _W - _MR - 70,
                 _MT + 10 + 14 * i, color, 2)
    return svg.finish()


def bar_chart(title, labels, values, ylabel, baseline_line=None):
    svg = _Svg(title)
    v_hi = max(list(values) + [1.0]) * 1.15
    n = len(labels)
    span = _W - _ML - _MR
    bw = span / max(n, 1) * 0.6

    def py(v):
        return _H - _MB - v / v_hi * (_H - _MT - _MB)

    svg.line(_ML, _H - _MB, _W - _MR, _H - _MB)
    svg.line(_ML, _MT, _ML, _H - _MB)
    step = max(round(v_hi / 5, 1), 0.1)
    t = 0.0
    while t <= v_hi:
        svg.line(_ML - 4, py(t), _ML, py(t))
        svg.text(_ML - 8, py(t) + 4, "%g" % round(t, 2), anchor="end")
        t += step
    for i, (label, v) in enumerate(zip(labels, values)):
        x = _ML + span * (i + 0.5) / n - bw / 2
        svg.rect(x, py(v), bw, _H - _MB - py(v), _PALETTE[i % len(_PALETTE)])
        svg.text(x + bw / 2, py(v) - 5, "%.2f" % v)
        svg.text(x + bw / 2, _H - _MB + 14, label, size=10,
                 rotate=20 if len(label) > 10 else None)
    if baseline_line is not None:
        svg.line(_ML, py(baseline_line), _W - _MR, py(baseline_line),
                 "#555", 1)
    svg.text(18, (_H - _MB + _MT) / 2, ylabel, rotate=-90)
    return svg.finish()


def scatter_chart(title, points, xlabel, ylabel):
    """points: [(x, y, label)]; linear axes from zero."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x1 = max(xs) * 1.1 or 1
    y1 = max(ys) * 1.15 or 1

    def px(x):
        return _ML + x / x1 * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - y / y1 * (_H - _MT - _MB)

    svg = _Svg(title)
    svg.line(_ML, _H - _MB, _W - _MR, _H - _MB)
    svg.line(_ML, _MT, _ML, _H - _MB)
    for frac in (0, 0.25, 0.5, 0.75, 1.0):
        svg.line(px(x1 * frac), _H - _MB, px(x1 * frac), _H - _MB + 4)
        svg.text(px(x1 * frac), _H - _MB + 18, "%g" % round(x1 * frac, 1))
        svg.line(_ML - 4, py(y1 * frac), _ML, py(y1 * frac))
        svg.text(_ML - 8, py(y1 * frac) + 4, "%g" % round(y1 * frac, 2),
                 anchor="end")
    for i, (x, y, label) in enumerate(points):
        color = _PALETTE[i % len(_PALETTE)]
        svg.circle(px(x), py(y), color, r=5)
        svg.text(px(x), py(y) - 9, label, size=10)
    svg.text((_W + _ML - _MR) / 2, _H - 15, xlabel)
    svg.text(18, (_H - _MB + _MT) / 2, ylabel, rotate=-90)
    return svg.finish()
