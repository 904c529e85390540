"""Command-line entry point.

Subcommands: bench (generation-speed microbenchmarks), etna (time-to-failure
bug finding), diff (backend equivalence), derive (schema-driven generation),
prng-kat (known-answer vectors for the randomness core).

Every run writes CSVs into the output directory (--out-dir, or the
STAGEGEN_OUT environment variable, default ./stagegen-out); charts are SVGs
derived from those CSVs.  Exit codes: 0 success, 1 divergence or assertion
failure, 2 usage error.
"""

import argparse
import os
import sys

from . import harness, report
from .baseline import b_run
from .derive import derive_baseline, derive_staged, load_schema
from .errors import ContractError, DerivationError, StagingError
from .lower import c_run, compile_gen
from .rand import (
    VARIANT_FAST,
    VARIANTS,
    format_kat,
    kat_words,
    parse_kat,
    seed_of_u64,
)
from .workloads import MUTANTS, PROPERTIES, WORKLOADS, all_tasks, get_workload
from .workloads.registry import (
    BST_SCHEMA,
    PAIR_SCHEMA,
    TERM_SCHEMA,
    TY_SCHEMA,
    compiled_for,
)

BUILTIN_SCHEMAS = {
    "bst": BST_SCHEMA,
    "stlc_term": TERM_SCHEMA,
    "stlc_ty": TY_SCHEMA,
    "pair": PAIR_SCHEMA,
}


def _out_dir(args):
    d = args.out_dir or os.environ.get("STAGEGEN_OUT") or "stagegen-out"
    os.makedirs(d, exist_ok=True)
    return d


def _write(path, text):
    with open(path, "w") as f:
        f.write(text)
    print("wrote", path)


def _treatments(args):
    backends = ("baseline", "staged") if args.backend == "both" else (args.backend,)
    prngs = ("fast", "slow") if args.prng == "both" else (args.prng,)
    return [t for t in harness.TREATMENTS
            if t.backend in backends and t.prng in prngs]


def _print_registry():
    print("workloads:")
    for wl in WORKLOADS.values():
        tags = [wl.suite] + (["bench"] if wl.bench else []) \
            + (["tasks"] if wl.tasks else [])
        print("  %-18s %-26s %s" % (wl.name, "(" + ",".join(tags) + ")", wl.note))
    print("mutants:")
    for m in MUTANTS.values():
        print("  %-24s target=%-7s property=%-12s %s"
              % (m.id, m.target, m.paired_property, m.description))
    print("properties:")
    for p in PROPERTIES.values():
        print("  %-14s suite=%-5s targets=%s" % (p.name, p.suite,
                                                 ",".join(sorted(p.targets))))
    print("tasks: <workload>:<mutant>:<property>, e.g. %s" % all_tasks()[0].id)


def _parse_sizes(text, default):
    if not text:
        return list(default)
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# subcommands


def cmd_bench(args):
    if args.list:
        _print_registry()
        return 0
    out = _out_dir(args)
    sizes = _parse_sizes(args.sizes, (10, 100, 1000, 10000))
    treatments = _treatments(args)
    if args.workload == "all":
        names = [w.name for w in WORKLOADS.values() if w.bench]
    else:
        names = [args.workload]
    rows = []
    for name in names:
        try:
            wl = get_workload(name)
        except KeyError as e:
            print(e, file=sys.stderr)
            _print_registry()
            return 2
        wl_rows = harness.bench_workload(
            wl, treatments=treatments, sizes=sizes,
            min_duration_s=args.min_duration,
            instrument_size=100 if args.instrument else -1)
        rows.extend(wl_rows)
        series = {}
        for r in wl_rows:
            series.setdefault(r.treatment, []).append((r.size, r.ns_per_value))
        _write(os.path.join(out, "bench_%s.svg" % name),
               report.line_chart_loglog("generation time: %s" % name, series,
                                        "size", "ns per value"))
    _write(os.path.join(out, "bench.csv"), report.bench_csv(rows))

    # binds-vs-speedup report at the instrumented size
    at100 = {}
    for r in rows:
        if r.size == 100:
            at100.setdefault(r.workload, {})[r.treatment] = r
    points = []
    for name, tr in at100.items():
        bf, sf = tr.get("baseline+fast"), tr.get("staged+fast")
        if bf and sf and bf.binds_per_value is not None:
            points.append((name, bf.binds_per_value,
                           bf.ns_per_value / sf.ns_per_value))
    if len(points) >= 2:
        csv = ["workload,binds_per_value,staging_speedup"]
        for name, binds, sp in points:
            csv.append("%s,%.2f,%.3f" % (name, binds, sp))
        rho = harness.spearman_rho([p[1] for p in points],
                                   [p[2] for p in points])
        csv.append("rank_correlation,,%.3f" % rho)
        _write(os.path.join(out, "bench_bindcorr.csv"), "\n".join(csv) + "\n")
        _write(os.path.join(out, "bench_bindcorr.svg"),
               report.scatter_chart(
                   "bind calls vs staging speedup (size 100), rho=%.2f" % rho,
                   [(b, s, n) for n, b, s in points],
                   "bind calls per value", "staging speedup"))
    if args.prng_cores:
        prng_rows = harness.bench_prng_cores()
        _write(os.path.join(out, "prng_cores.csv"), report.prng_csv(prng_rows))
        for core, op, ns in prng_rows:
            print("%-14s %-20s %8.1f ns/call" % (core, op, ns))
    return 0


def cmd_etna(args):
    if args.list:
        _print_registry()
        return 0
    out = _out_dir(args)
    tasks = all_tasks()
    if args.task != "all":
        parts = args.task.split(":")
        if len(parts) != 3:
            print("task selector must be <workload-or-suite>:mutant:property",
                  file=sys.stderr)
            return 2
        first, mutant, prop = parts
        sel = [t for t in tasks
               if t.mutant == mutant and t.prop == prop
               and (t.workload == first
                    or get_workload(t.workload).suite == first)]
        if not sel:
            known = {t.mutant for t in tasks}
            if mutant not in known:
                print("unknown mutant %r" % mutant, file=sys.stderr)
            _print_registry()
            return 2
        tasks = sel
    if args.workload != "all":
        tasks = [t for t in tasks if t.workload == args.workload]
        if not tasks:
            print("no tasks for workload %r" % args.workload, file=sys.stderr)
            _print_registry()
            return 2
    treatments = _treatments(args)
    outcomes = harness.run_suite(
        tasks, treatments, range(args.seeds), args.timeout_s, args.max_size,
        progress=(lambda o: print(" ", o.task.id, "seed", o.seed_id,
                                  o.treatment,
                                  "found" if o.found else "timeout",
                                  o.values_tried, "tried"))
        if args.verbose else None)
    _write(os.path.join(out, "etna.csv"), report.etna_csv(outcomes))

    # speedup tables against both baseline denominators
    lines = ["workload,numerator,denominator,pairs,geo_mean_speedup"]
    bars = {}
    for denom in (harness.BASELINE_FAST, harness.BASELINE_SLOW):
        if denom not in treatments:
            continue
        for numer in treatments:
            if numer == denom:
                continue
            by_wl = {}
            ratios, _ = harness.per_task_speedups(
                outcomes, denom, numer, args.threshold_ms * 1_000_000)
            for (task, _seed), ratio in ratios.items():
                by_wl.setdefault(task.workload, []).append(ratio)
            for wl_name, rs in sorted(by_wl.items()):
                gm = harness.geo_mean(rs)
                lines.append("%s,%s,%s,%d,%.3f"
                             % (wl_name, numer.name, denom.name, len(rs), gm))
                if denom == harness.BASELINE_FAST:
                    bars["%s %s" % (wl_name, numer.name)] = gm
    _write(os.path.join(out, "etna_speedup.csv"), "\n".join(lines) + "\n")
    selector = args.task if args.task != "all" else args.workload
    if bars:
        _write(os.path.join(out, "etna_%s.svg" % selector.replace(":", "_")),
               report.bar_chart("bug-finding speedup vs baseline+fast",
                                list(bars), list(bars.values()),
                                "geo-mean speedup", baseline_line=1.0))
    found = sum(1 for o in outcomes if o.found)
    print("outcomes: %d, found: %d, timeouts: %d"
          % (len(outcomes), found, len(outcomes) - found))
    return 0


def cmd_diff(args):
    if args.list:
        _print_registry()
        return 0
    out = _out_dir(args)
    sizes = _parse_sizes(args.sizes, (10, 100))
    if args.workload == "all":
        names = list(WORKLOADS)
    else:
        names = [args.workload]
    reports = []
    code = 0
    for name in names:
        try:
            wl = get_workload(name)
        except KeyError as e:
            print(e, file=sys.stderr)
            _print_registry()
            return 2
        if args.dump_ir:
            print("=== %s ===" % name)
            print(compiled_for(wl).dump_ir())
        rep = harness.diff_test(wl, sizes=sizes, n_seeds=args.seeds)
        reports.append(rep)
        status = "ok" if rep.ok else "DIVERGED"
        print("%-18s %d seeds x sizes %s: %s"
              % (name, args.seeds, sizes, status))
        for d in rep.divergences[:5]:
            print("   seed %d size %d: %s differs\n     baseline: %r\n     staged:   %r"
                  % (d.seed, d.size, d.field, d.baseline, d.staged))
        if not rep.ok:
            code = 1
    _write(os.path.join(out, "diff.csv"), report.diff_csv(reports))
    return code


def cmd_derive(args):
    if args.list:
        print("builtin schemas: %s" % ", ".join(sorted(BUILTIN_SCHEMAS)))
        return 0
    if args.schema.startswith("builtin:"):
        name = args.schema.split(":", 1)[1]
        if name not in BUILTIN_SCHEMAS:
            print("unknown builtin schema %r; have: %s"
                  % (name, ", ".join(sorted(BUILTIN_SCHEMAS))), file=sys.stderr)
            return 2
        schema = BUILTIN_SCHEMAS[name]
    else:
        try:
            with open(args.schema) as f:
                schema = load_schema(f.read())
        except (OSError, DerivationError, ValueError) as e:
            print("cannot load schema: %s" % e, file=sys.stderr)
            return 2
    try:
        if args.backend == "staged":
            gen = compile_gen(derive_staged(schema))
            if args.dump_ir:
                print(gen.dump_ir())
            runner = lambda size, seed: c_run(gen, size, seed)
        else:
            gen = derive_baseline(schema)
            runner = lambda size, seed: b_run(gen, size, seed)
    except (DerivationError, StagingError) as e:
        print("derivation failed: %s" % e, file=sys.stderr)
        return 2
    master = seed_of_u64(args.seed)
    for _ in range(args.count):
        print(repr(runner(args.size, master.split())))
    return 0


def cmd_prng_kat(args):
    if args.list:
        print("variants: %s" % ", ".join(VARIANTS))
        return 0
    words = kat_words(args.seed, args.count, args.variant)
    text = format_kat(words)
    if args.check:
        try:
            with open(args.check) as f:
                expected = parse_kat(f.read())
        except (OSError, ValueError) as e:
            print("cannot read KAT file: %s" % e, file=sys.stderr)
            return 2
        if expected != words:
            first = next(i for i, (a, b) in enumerate(zip(expected, words))
                         if a != b) if len(expected) == len(words) else -1
            print("KAT MISMATCH (first difference at index %d)" % first)
            return 1
        print("KAT ok: %d words" % len(words))
        return 0
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="stagegen",
        description="generator toolkit benchmarks: naive vs staged backends, "
                    "fast vs deliberately slow randomness")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--out-dir", default=None,
                        help="output directory (default $STAGEGEN_OUT or ./stagegen-out)")
        sp.add_argument("--list", action="store_true",
                        help="list registered workloads/tasks/mutants and exit")

    b = sub.add_parser("bench", help="generation-speed microbenchmarks")
    common(b)
    b.add_argument("--workload", default="all")
    b.add_argument("--sizes", default="", help="comma list (default 10,100,1000,10000)")
    b.add_argument("--min-duration", type=float, default=0.5,
                   help="seconds of steady-state measurement per point")
    b.add_argument("--backend", choices=("baseline", "staged", "both"),
                   default="both")
    b.add_argument("--prng", choices=("fast", "slow", "both"), default="both")
    b.add_argument("--instrument", action=argparse.BooleanOptionalAction,
                   default=True, help="run the separate instrumented pass at size 100")
    b.add_argument("--prng-cores", action="store_true",
                   help="also benchmark the seed cores in isolation")
    b.set_defaults(fn=cmd_bench)

    e = sub.add_parser("etna", help="time-to-failure bug finding")
    common(e)
    e.add_argument("--task", default="all",
                   help="workload:mutant:property, or all")
    e.add_argument("--workload", default="all", help="filter tasks by workload")
    e.add_argument("--seeds", type=int, default=10)
    e.add_argument("--timeout-s", type=float, default=10.0, dest="timeout_s")
    e.add_argument("--max-size", type=int, default=50)
    e.add_argument("--threshold-ms", type=float, default=5.0,
                   help="negligible-runtime filter threshold")
    e.add_argument("--backend", choices=("baseline", "staged", "both"),
                   default="both")
    e.add_argument("--prng", choices=("fast", "slow", "both"), default="both")
    e.add_argument("--verbose", action="store_true")
    e.set_defaults(fn=cmd_etna)

    d = sub.add_parser("diff", help="backend pointwise-equivalence suite")
    common(d)
    d.add_argument("--workload", default="all")
    d.add_argument("--sizes", default="", help="comma list (default 10,100)")
    d.add_argument("--seeds", type=int, default=1000)
    d.add_argument("--dump-ir", action="store_true",
                   help="print each staged workload's program text")
    d.set_defaults(fn=cmd_diff)

    dv = sub.add_parser("derive", help="generate values from a schema")
    common(dv)
    dv.add_argument("--schema", default="builtin:bst",
                    help="JSON schema file, or builtin:<name>")
    dv.add_argument("--backend", choices=("baseline", "staged"),
                    default="staged")
    dv.add_argument("--size", type=int, default=10)
    dv.add_argument("--count", type=int, default=5)
    dv.add_argument("--seed", type=int, default=0)
    dv.add_argument("--dump-ir", action="store_true")
    dv.set_defaults(fn=cmd_derive)

    k = sub.add_parser("prng-kat", help="known-answer vectors for the PRNG")
    common(k)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--count", type=int, default=1000)
    k.add_argument("--variant", choices=VARIANTS, default=VARIANT_FAST)
    k.add_argument("--out", default=None, help="write vectors to a file")
    k.add_argument("--check", default=None,
                   help="verify output against an existing vector file")
    k.set_defaults(fn=cmd_prng_kat)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ContractError as e:
        print("contract error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
