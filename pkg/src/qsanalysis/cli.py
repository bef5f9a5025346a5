"""Command-line front end.

Every subcommand produces a table that is written as CSV (header row
always present) or as a minimal SVG line plot.  Exit codes: 0 success,
1 internal failure, 2 usage error.
"""

import argparse
import io
import math
import os
import sys
import tempfile
import traceback
from fractions import Fraction
from xml.sax.saxutils import escape

import numpy as np

from . import analysis as A
from . import empirics as E
from . import sorters as S
from .distribution import stddev_of
from .numerics import WideScalar, ws_factorial, ws_to_decimal
from .pivot_models import Model, ModelConfig, pivot_kernel
from .recurrences import average_comparisons, frequency_distribution, max_comparisons

LONG_N = 200
ALL_CURVES = ("1", "2", "3", "4a", "4b", "5")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_models(text, q_min, n_b_max):
    """'1,4a,5' or 'all' -> [(label, ModelConfig)].

    Labels 4a and 4b are model 4 with q_min 10 and 5; plain numbers use
    the --qmin/--nbmax flags.
    """
    labels = ALL_CURVES if text == "all" else [t.strip() for t in text.split(",") if t.strip()]
    if not labels:
        raise UsageError("--model: model must be 1..5")
    out = []
    for lab in labels:
        if lab == "4a":
            out.append((lab, ModelConfig(Model.RECURSIVE_MOM, 10, n_b_max)))
        elif lab == "4b":
            out.append((lab, ModelConfig(Model.RECURSIVE_MOM, 5, n_b_max)))
        elif lab in ("1", "2", "3", "4", "5"):
            out.append((lab, ModelConfig(int(lab), q_min, n_b_max)))
        else:
            raise UsageError("--model: model must be 1..5")
    return out


def _range(text, conv, flag):
    # "7", "2..10", "0..1000:10" or comma lists of those
    vals = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, rest = part.split("..", 1)
                hi, step = rest.split(":", 1) if ":" in rest else (rest, "1")
                lo, hi, step = conv(lo), conv(hi), conv(step)
                if step <= 0:
                    raise ValueError
                k = 0
                while lo + k * step <= hi * (1 + 1e-12):
                    vals.append(lo + k * step)
                    k += 1
            else:
                vals.append(conv(part))
        except ValueError:
            raise UsageError(f"{flag}: cannot parse {part!r}") from None
    return vals


def _int(s):
    f = float(s)
    if f != int(f):
        raise ValueError
    return int(f)


def parse_sizes(text, flag="--n"):
    ns = _range(text, _int, flag)
    if any(n < 0 for n in ns):
        raise UsageError(f"{flag}: n must be >= 0")
    return ns


def parse_taus(text):
    taus = [round(t, 12) for t in _range(text, float, "--tau")]
    if any(not t > 1 for t in taus):
        raise UsageError("--tau: tau must be > 1")
    return taus


def _need_long(args, ns):
    if max(ns, default=0) > LONG_N and not args.allow_long:
        raise UsageError(f"--n: distributions beyond n={LONG_N} take minutes to hours; "
                         "pass --allow-long")


# ---------------------------------------------------------------------------
# tables and formatting


class Table:
    """Rows plus optional plot hints (x column, y column, series column)."""

    def __init__(self, header, rows, x=None, y=None, series=None, logy=False, title=""):
        self.header = list(header)
        self.rows = rows
        self.x, self.y, self.series = x, y, series
        self.logy = logy
        self.title = title


def fmt(v, digits):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, WideScalar):
        return ws_to_decimal(v, digits)
    v = float(v)
    if v == 0:
        return "0"
    if not math.isfinite(v):
        return str(v)
    return ("-" if v < 0 else "") + ws_to_decimal(WideScalar(abs(v)), digits)


def to_csv(table, digits):
    buf = io.StringIO()
    buf.write(",".join(table.header) + "\r\n")
    for row in table.rows:
        cells = []
        for v in row:
            s = fmt(v, digits)
            if any(c in s for c in ',"\r\n'):
                s = '"' + s.replace('"', '""') + '"'
            cells.append(s)
        buf.write(",".join(cells) + "\r\n")
    return buf.getvalue()


def _num(v):
    if isinstance(v, WideScalar):
        return v.log2() * math.log10(2) if not v.is_zero() else None, True
    if isinstance(v, Fraction):
        return float(v), False
    return float(v), False


def to_svg(table, logy=None):
    if table.x is None or table.y is None:
        raise UsageError("--format: this command has no plot form; use csv")
    logy = table.logy if logy is None else logy
    xi = table.header.index(table.x)
    yi = table.header.index(table.y)
    si = table.header.index(table.series) if table.series else None
    series = {}
    for row in table.rows:
        x = float(row[xi])
        y, is_log = _num(row[yi])
        if is_log or logy:
            if y is None or (not is_log and y <= 0):
                continue
            y = y if is_log else math.log10(y)
        key = str(row[si]) if si is not None else table.y
        series.setdefault(key, []).append((x, y))
    W, H, pad = 640, 400, 50
    pts = [p for s in series.values() for p in s]
    if not pts:
        raise UsageError("--format: nothing to plot")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (W - 2 * pad)

    def sy(y):
        return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad)

    ylab = ("log10 " if logy or any(isinstance(r[yi], WideScalar) for r in table.rows) else "") + table.y
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
           f'<text x="{W / 2}" y="20" text-anchor="middle">{escape(table.title)}</text>',
           f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
           f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle">{escape(table.x)}</text>',
           f'<text x="12" y="{H / 2}" transform="rotate(-90 12 {H / 2})" '
           f'text-anchor="middle">{escape(ylab)}</text>',
           f'<text x="{pad}" y="{H - pad + 15}" text-anchor="middle">{x0:g}</text>',
           f'<text x="{W - pad}" y="{H - pad + 15}" text-anchor="middle">{x1:g}</text>',
           f'<text x="{pad - 4}" y="{H - pad}" text-anchor="end">{y0:.4g}</text>',
           f'<text x="{pad - 4}" y="{pad}" text-anchor="end">{y1:.4g}</text>']
    colours = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
    for k, (name, s) in enumerate(series.items()):
        c = colours[k % len(colours)]
        poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in s)
        out.append(f'<polyline fill="none" stroke="{c}" points="{poly}"/>')
        out.append(f'<text x="{W - pad + 4}" y="{sy(s[-1][1]):.2f}" fill="{c}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    except OSError as e:
        raise UsageError(f"--out: cannot write {path}: {e.strerror}") from None
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# subcommands


def cmd_dist(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    _need_long(args, ns)
    many = len(models) > 1 or len(ns) > 1
    rows = []
    for lab, cfg in models:
        for n in ns:
            f = frequency_distribution(cfg, n, args.selection, progress=n > LONG_N)
            nf = ws_factorial(n)
            for j, w in f.items():
                row = [j, w, w / nf]
                rows.append([lab, n] + row if many else row)
    head = ["j", "frequency", "probability"]
    return Table((["model", "n"] + head) if many else head, rows, "j", "probability",
                 "model" if many else None, title="frequency distribution")


def cmd_avg(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    rows = [[lab, n, average_comparisons(cfg, n, args.selection)] for lab, cfg in models for n in ns]
    return Table(["model", "n", "average"], rows, "n", "average", "model",
                 title="average comparisons")


def cmd_max(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    rows = []
    for lab, cfg in models:
        if ns:
            max_comparisons(cfg, max(ns))
        for n in ns:
            row = [lab, n, max_comparisons(cfg, n)]
            if args.bound:
                row.append(3.8 * n**1.37)
            rows.append(row)
    head = ["model", "n", "max"] + (["bound"] if args.bound else [])
    return Table(head, rows, "n", "max", "model", title="maximum comparisons")


def cmd_badprob(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    taus = parse_taus(args.tau)
    base = parse_sizes(str(args.ratio_to), "--ratio-to")[0] if args.ratio_to is not None else None
    _need_long(args, ns + ([base] if base is not None else []))
    rows = []
    for lab, cfg in models:
        for n in ns:
            for tau in taus:
                p = A.bad_case_probability(A.BadCaseQuery(cfg, n, tau), progress=n > LONG_N)
                row = [lab, n, f"{tau:g}", p]
                if args.times:
                    row.append(A.expected_time_to_event(p, args.interval))
                if base is not None:
                    p0 = A.bad_case_probability(A.BadCaseQuery(cfg, base, tau), progress=base > LONG_N)
                    row.append(None if p0.is_zero() else float(p / p0))
                rows.append(row)
    head = ["model", "n", "tau", "probability"]
    head += ["expected_time"] if args.times else []
    head += [f"ratio_to_{base}"] if base is not None else []
    # one series per model and tau when n varies, per model and n otherwise
    x = "n" if len(ns) > 1 else "tau"
    for row in rows:
        row.insert(0, f"{row[0]} tau={row[2]}" if x == "n" else f"{row[0]} n={row[1]}")
    return Table(["series"] + head, rows, x, "probability", "series", logy=True,
                 title="bad-case probability")


def cmd_sigma(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    _need_long(args, ns)
    rows = []
    for lab, cfg in models:
        for n in ns:
            s = float(stddev_of(frequency_distribution(cfg, n, progress=n > LONG_N)))
            ref = A.iliopoulos_sigma(n) if cfg.model == Model.SIMPLE and n >= 1 else None
            rel = (s - ref) / ref if ref else None
            rows.append([lab, n, s, ref, rel])
    return Table(["model", "n", "sigma", "iliopoulos", "rel_diff"], rows, "n", "sigma", "model",
                 title="standard deviation of comparisons")


def cmd_kernel(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    many = len(models) > 1 or len(ns) > 1
    rows = []
    for lab, cfg in models:
        for n in ns:
            k = pivot_kernel(cfg, n, args.m)
            for i, p in enumerate(k.values):
                rows.append([lab, n, i, float(p)] if many else [i, float(p)])
    head = (["model", "n"] if many else []) + ["i", "p"]
    return Table(head, rows, "i", "p", "model" if many else None, title="pivot kernel")


def _panel_cfg(m, q_min):
    if m == 3:
        return ModelConfig(Model.MEDIAN_OF_3)
    if m == 9:
        return ModelConfig(Model.MEDIAN_OF_MEDIANS, q_min)
    return ModelConfig(Model.RECURSIVE_MOM, q_min)


def cmd_simulate(args):
    ns = parse_sizes(args.n)
    ms = _range(args.samples, _int, "--samples")
    if args.trials < 1:
        raise UsageError("--trials: trials must be >= 1")
    rows = []
    for n in ns:
        for m in ms:
            if m != 1 and (m < 3 or not _pow3(m) or m > n):
                raise UsageError("--samples: sample sizes must be 1 or powers of 3 not above n")
            cfg = ModelConfig(Model.SIMPLE) if m == 1 else _panel_cfg(m, args.qmin)
            hist = E.simulate_pivot_positions(cfg, n, args.trials, args.bin, args.seed,
                                              m=m if m >= 27 else None)
            kern = pivot_kernel(cfg, n, m).values
            for b, c in enumerate(hist):
                lo = b * args.bin
                model = float(np.sum(kern[lo:lo + args.bin]))
                rows.append([f"m={m}", n, lo, int(c), n * c / args.trials, model])
    return Table(["panel", "n", "bin_start", "count", "simulated", "kernel"], rows,
                 "bin_start", "simulated", "panel", title="pivot positions")


def _pow3(m):
    while m % 3 == 0:
        m //= 3
    return m == 1


def cmd_tables(args):
    which = args.which
    if which == "partition":
        ns = parse_sizes(args.n or "2..10")
        if any(not 2 <= n <= 11 for n in ns):
            raise UsageError("--n: partition tables are enumerated for 2 <= n <= 11")
        rows = []
        for scheme in S.Scheme:
            for n in ns:
                r = E.enumerate_partition_stats(scheme, n)
                rows.append([scheme.name.lower(), n, r.C_avg, r.M_avg,
                             f"{float(r.C_avg):.3f}", f"{float(r.M_avg):.3f}"])
        return Table(["scheme", "n", "C_avg", "M_avg", "C_avg_dec", "M_avg_dec"], rows)
    if which == "histogram":
        ns = parse_sizes(args.n or "10")
        rows = []
        for scheme in (S.Scheme.CLASSIC_COLLISION, S.Scheme.CLASSIC_COLLISION_EXTENDED,
                       S.Scheme.SWEEP_EXTENDED):
            for n in ns:
                if not 2 <= n <= 11:
                    raise UsageError("--n: partition tables are enumerated for 2 <= n <= 11")
                for j, c in sorted(E.enumerate_partition_stats(scheme, n).histogram.items()):
                    rows.append([scheme.name.lower(), n, j, c])
        return Table(["scheme", "n", "comparisons", "frequency"], rows)
    if which == "averages":
        args.n = args.n or "1000,2000,5000,10000"
        args.model = args.model if args.model_given else "all"
        return cmd_avg(args)
    if which == "adversary":
        args.n = args.n or "100000"
        args.model = "1,2,3,4,5" if not args.model_given else args.model
        return cmd_adversary(args)
    if which in ("probabilities", "times", "ratios"):
        args.n = args.n or "500"
        args.tau = args.tau or "1.1,1.25,1.5,2.0"
        args.model = "1,2,3,5" if not args.model_given else args.model
        args.times = which == "times"
        args.ratio_to = 250 if which == "ratios" else None
        return cmd_badprob(args)
    raise UsageError(f"--which: unknown table {which!r}")


def _sorter_specs(args, models=None):
    specs = []
    algs = [a.strip() for a in args.alg.split(",")]
    for alg in algs:
        if alg == "quicksort":
            for lab, cfg in models or parse_models(args.model, args.qmin, args.nbmax):
                for tw in ((False, True) if args.threeway == "both" else (args.threeway == "yes",)):
                    specs.append(E.SorterSpec("quicksort", int(cfg.model), tw, cfg.q_min, args.nbmax))
        elif alg in ("heapsort", "heapsort-classic"):
            specs.append(E.SorterSpec("heapsort", variant=int(S.HeapVariant.CLASSIC)))
        elif alg == "heapsort-bottomup":
            specs.append(E.SorterSpec("heapsort", variant=int(S.HeapVariant.BOTTOM_UP)))
        elif alg == "insertion":
            specs.append(E.SorterSpec("insertion"))
        else:
            raise UsageError(f"--alg: unknown sorter {alg!r}")
    return specs


def cmd_adversary(args):
    ns = parse_sizes(args.n)
    rows = []
    for spec in _sorter_specs(args):
        for n in ns:
            r = E.killer_adversary(spec, n)
            rows.append([spec.label(), n, r.comparisons, r.replay_comparisons])
            if args.save_input:
                np.savetxt(f"{args.save_input}-{spec.label()}-{n}.txt", r.input, fmt="%d")
    return Table(["sorter", "n", "comparisons", "replay_comparisons"], rows)


def cmd_bench(args):
    ns = parse_sizes(args.n)
    kinds = [E.DataKind(k.strip()) for k in args.generator.split(",")] if args.generator != "all" \
        else list(E.DataKind)
    elem = E.ElementKind(args.element)
    rows = []
    for kind in kinds:
        for n in ns:
            for spec in _sorter_specs(args):
                r = E.benchmark(spec, E.DatasetSpec(kind, n, args.seed, elem), args.repeats)
                rows.append([kind.value, n, spec.label(), round(r["median_ms"], 3),
                             r["comparisons"], r["movements"]])
    return Table(["generator", "n", "sorter", "median_ms", "comparisons", "movements"], rows)


def cmd_sort(args):
    if args.input:
        try:
            data = np.loadtxt(args.input, ndmin=1)
        except (OSError, ValueError) as e:
            raise UsageError(f"--input: cannot read {args.input}: {e}") from None
        if np.all(data == np.round(data)):
            data = data.astype(np.int64)
    else:
        ns = parse_sizes(args.n)
        data = E.generate_dataset(E.DatasetSpec(E.DataKind(args.generator), ns[0], args.seed))
    specs = _sorter_specs(args)
    if len(specs) != 1:
        raise UsageError("--alg/--model: sort runs exactly one sorter")
    out, st = E.run_sorter(specs[0], data)
    if not args.stats:
        return Table(["value"], [[v] for v in out.tolist()])
    return Table(["sorter", "n", "comparisons", "movements", "max_stack_depth", "selection_comparisons"],
                 [[specs[0].label(), len(out), st.comparisons, st.movements, st.max_stack_depth,
                   st.selection_comparisons]])


def cmd_oracle(args):
    models = parse_models(args.model, args.qmin, args.nbmax)
    ns = parse_sizes(args.n)
    if any(n > 10 for n in ns):
        raise UsageError("--n: the permutation oracle is limited to n <= 10")
    rows = []
    for lab, cfg in models:
        for n in ns:
            hist = E.enumerate_sort_histogram(n, int(cfg.model), False, cfg.q_min, cfg.n_b_max)
            f = dict(frequency_distribution(cfg, n).items())
            for j in sorted(set(hist) | set(f)):
                rows.append([lab, n, j, hist.get(j, 0), f.get(j, 0)])
    return Table(["model", "n", "j", "enumerated", "recurrence"], rows)


def cmd_bound(args):
    r = A.worst_case_bound_check(parse_sizes(args.n)[0], args.qmin, args.nbmax)
    return Table(["n_max", "max_ratio", "argmax", "violations", "first_violation",
                  "lead_model1", "lead_model2", "lead_model3"],
                 [[r.n_max, r.max_ratio, r.argmax, r.violations, r.first_violation,
                   r.leading[1], r.leading[2], r.leading[3]]])


COMMANDS = {
    "dist": (cmd_dist, "frequency distribution f_n as j,frequency,probability"),
    "avg": (cmd_avg, "average comparisons"),
    "max": (cmd_max, "maximum comparisons (add --bound for 3.8 n^1.37)"),
    "badprob": (cmd_badprob, "probability of needing more than tau times the average"),
    "sigma": (cmd_sigma, "standard deviation of comparisons"),
    "kernel": (cmd_kernel, "pivot position kernel p_n(i)"),
    "tables": (cmd_tables, "reproduce a results table (--which)"),
    "oracle": (cmd_oracle, "brute-force histogram next to the recurrence (n <= 10)"),
    "simulate": (cmd_simulate, "Monte-Carlo pivot positions against the kernels"),
    "adversary": (cmd_adversary, "comparisons forced by the killer adversary"),
    "bench": (cmd_bench, "timing and counters per generator and sorter"),
    "sort": (cmd_sort, "sort a file or generated data with one sorter"),
    "bound": (cmd_bound, "worst-case power-law bound check for model 5"),
}


class _ModelAction(argparse.Action):
    def __call__(self, parser, ns, values, option_string=None):
        setattr(ns, self.dest, values)
        ns.model_given = True


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="5", action=_ModelAction,
                        help="model ids 1..5, 4a (q_min 10), 4b (q_min 5), comma list or 'all'")
    common.add_argument("--qmin", type=int, default=5)
    common.add_argument("--nbmax", type=int, default=9)
    common.add_argument("--n", "--nmax", dest="n", default=None,
                        help="size, range a..b[:step] or comma list")
    common.add_argument("--tau", default=None, help="threshold factor(s) > 1")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "svg"), default="csv")
    common.add_argument("--logy", action="store_true", help="log-scale y axis in SVG")
    common.add_argument("--digits", type=int, default=6)
    common.add_argument("--allow-long", action="store_true",
                        help=f"permit distributions with n > {LONG_N}")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--selection", choices=("shift", "convolve", "mean"), default="shift",
                        help="selection-cost convention (mean only for avg)")

    p = argparse.ArgumentParser(prog="qsanalysis", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}
    subs["kernel"].add_argument("--m", type=int, default=None, help="force the sample size")
    s = subs["simulate"]
    s.add_argument("--trials", type=int, default=1_000_000)
    s.add_argument("--bin", type=int, default=10)
    s.add_argument("--samples", default="3,9,27,81", help="sample sizes m, one panel each")
    b = subs["badprob"]
    b.add_argument("--times", action="store_true", help="add the expected time to one bad case")
    b.add_argument("--interval", type=float, default=1.0, help="ms between sorts for --times")
    b.add_argument("--ratio-to", type=int, default=None, help="add p_n / p_N for this N")
    subs["max"].add_argument("--bound", action="store_true")
    t = subs["tables"]
    t.add_argument("--which", required=True,
                   choices=("partition", "histogram", "averages", "adversary", "probabilities",
                            "times", "ratios"))
    for name in ("tables", "adversary", "bench", "sort"):
        q = subs[name]
        q.add_argument("--alg", default="quicksort",
                       help="quicksort, heapsort-classic, heapsort-bottomup, insertion (comma list)")
        q.add_argument("--threeway", choices=("no", "yes", "both"), default="no")
    subs["tables"].set_defaults(times=False, ratio_to=None, interval=1.0, bound=False,
                                save_input=None)
    subs["adversary"].add_argument("--save-input", default=None, help="file prefix for bad inputs")
    g = subs["bench"]
    g.add_argument("--generator", default="all")
    g.add_argument("--element", choices=[e.value for e in E.ElementKind], default="int")
    g.add_argument("--repeats", type=int, default=3)
    q = subs["sort"]
    q.add_argument("--input", default=None, help="whitespace-separated numbers")
    q.add_argument("--generator", default="random")
    q.add_argument("--stats", action="store_true")
    p.set_defaults(model_given=False)
    return p


DEFAULT_N = {"dist": "100", "avg": "1000", "max": "1000", "badprob": "100", "sigma": "100",
             "kernel": "500", "oracle": "7", "simulate": "500", "adversary": "100000",
             "bench": "100000", "sort": "1000", "bound": "1000000"}


def _validate(args):
    if args.qmin < 1:
        raise UsageError("--qmin: q_min must be >= 1")
    if args.nbmax < 3:
        raise UsageError("--nbmax: n_b_max must be >= 3")
    if not 1 <= args.digits <= 17:
        raise UsageError("--digits: digits must be in 1..17")
    if args.threads is not None and args.threads < 1:
        raise UsageError("--threads: threads must be >= 1")
    if args.cmd != "tables" and args.n is None:
        args.n = DEFAULT_N[args.cmd]
    if args.cmd == "badprob" and args.tau is None:
        args.tau = "1.25"
    if args.tau is not None:
        parse_taus(args.tau)
    parse_models(args.model, args.qmin, args.nbmax)
    if args.n is not None:
        parse_sizes(args.n)
    if args.selection == "mean" and args.cmd != "avg":
        raise UsageError("--selection: 'mean' applies to avg only")
    if args.out and not os.path.isdir(os.path.dirname(os.path.abspath(args.out))):
        raise UsageError(f"--out: directory of {args.out} does not exist")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        if args.threads:
            import numba

            numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
        table = COMMANDS[args.cmd][0](args)
        text = to_svg(table, args.logy or None) if args.format == "svg" else to_csv(table, args.digits)
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    except UsageError as e:
        parser.error(str(e))
    except ValueError as e:
        # library-level validation (bad model, n, tau) surfaces as usage errors
        parser.error(str(e))
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except Exception:
        traceback.print_exc()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
