"""Measurement engine: differential equivalence runs, generation-speed
microbenchmarks with draw/bind instrumentation, and the time-to-failure
bug-finding protocol with filtering and geometric-mean aggregation.

Protocol invariants this module leans on:

* the two backends are seed-pointwise equivalent, and the fast/slow PRNG
  variants are bit-identical -- so for a given (task, seed) every treatment
  sees exactly the same value sequence, and time-to-failure differences are
  pure throughput;
* per-iteration seeds are derived by splitting a master seed computed from
  stable identifiers, so treatments replay identical streams without any
  stream being stored.

Timed regions exclude instrumentation and report I/O, and run with the
cyclic garbage collector paused: generated values are acyclic tuples, so
nothing accumulates, and collector pauses would otherwise be the dominant
run-to-run timing noise.  Instrumented passes are separate and unmeasured.
"""

import contextlib
import gc
import hashlib
import math
import sys
import threading
import time
from dataclasses import dataclass

from .baseline import b_run
from .lower import c_run
from .rand import VARIANT_FAST, VARIANT_SLOW, FastSeedPy, IndirectSeed, end_state, seed_of_u64
from .workloads import (
    all_tasks,
    get_mutant,
    get_property,
    get_workload,
    make_ops,
    property_input_gen,
)
from .workloads.registry import compiled_for

BACKENDS = ("baseline", "staged")


@dataclass(frozen=True)
class Treatment:
    backend: str  # baseline | staged
    prng: str     # fast | slow

    @property
    def name(self):
        return "%s+%s" % (self.backend, self.prng)


BASELINE_FAST = Treatment("baseline", VARIANT_FAST)
STAGED_FAST = Treatment("staged", VARIANT_FAST)
BASELINE_SLOW = Treatment("baseline", VARIANT_SLOW)
STAGED_SLOW = Treatment("staged", VARIANT_SLOW)
TREATMENTS = (BASELINE_FAST, STAGED_FAST, BASELINE_SLOW, STAGED_SLOW)


def treatment_by_name(name):
    for t in TREATMENTS:
        if t.name == name:
            return t
    raise KeyError("unknown treatment %r" % name)


def stable_u64(text):
    """Stable 64-bit identifier hash (never python's randomized hash)."""
    return int.from_bytes(hashlib.blake2b(
        text.encode(), digest_size=8).digest(), "big")


# ---------------------------------------------------------------------------
# deep-recursion headroom
#
# Large sizes drive both backends through recursion depths far beyond the
# default interpreter limits (the baseline nests several frames per list
# element).  Harness entry points run their work in a worker thread with a
# large stack and a raised recursion limit.

_STACK_BYTES = 512 * 1024 * 1024
_RECURSION_LIMIT = 1_000_000
_headroom = threading.local()


@contextlib.contextmanager
def _quiet_timing():
    """Pause the cyclic collector for a timed region."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def call_with_headroom(fn, *args, **kwargs):
    """Run fn on a big-stack worker thread; reentrant calls run inline, so
    wrapping a whole batch costs one thread."""
    if getattr(_headroom, "active", False):
        return fn(*args, **kwargs)
    box = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(_RECURSION_LIMIT)
        _headroom.active = True
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc
        finally:
            _headroom.active = False
            sys.setrecursionlimit(old)

    old_size = threading.stack_size(_STACK_BYTES)
    try:
        worker = threading.Thread(target=target, name="stagegen-worker")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_size)
    if "error" in box:
        raise box["error"]
    return box["value"]


# ---------------------------------------------------------------------------
# differential equivalence


@dataclass(frozen=True)
class Divergence:
    workload: str
    size: int
    seed: int
    field: str  # value | end_state | sample_count
    baseline: object
    staged: object


@dataclass
class DiffReport:
    workload: str
    sizes: tuple
    n_seeds: int
    checked: int
    divergences: list

    @property
    def ok(self):
        return not self.divergences


def diff_test(workload, sizes=(10, 100), n_seeds=1000, compiled=None,
              max_report=20):
    """Assert pointwise equivalence of the two backends on one workload:
    equal values, equal seed end-states, equal draw counts, for every
    (seed, size).  Any divergence is reported with the offending seed."""
    wl = get_workload(workload) if isinstance(workload, str) else workload
    gen_b = wl.make_baseline()
    gen_s = compiled if compiled is not None else compiled_for(wl)

    def run():
        divergences = []
        checked = 0
        for seed_i in range(n_seeds):
            for size in sizes:
                s_b = seed_of_u64(seed_i, VARIANT_FAST, instrument=True)
                s_s = seed_of_u64(seed_i, VARIANT_FAST, instrument=True)
                vb = b_run(gen_b, size, s_b)
                vs = c_run(gen_s, size, s_s)
                checked += 1
                if len(divergences) >= max_report:
                    continue
                if vb != vs:
                    divergences.append(Divergence(
                        wl.name, size, seed_i, "value", vb, vs))
                elif end_state(s_b) != end_state(s_s):
                    divergences.append(Divergence(
                        wl.name, size, seed_i, "end_state",
                        end_state(s_b), end_state(s_s)))
                elif s_b.sample_count != s_s.sample_count:
                    divergences.append(Divergence(
                        wl.name, size, seed_i, "sample_count",
                        s_b.sample_count, s_s.sample_count))
        return DiffReport(wl.name, tuple(sizes), n_seeds, checked, divergences)

    return call_with_headroom(run)


# ---------------------------------------------------------------------------
# generation-speed microbenchmarks


@dataclass
class BenchRow:
    workload: str
    treatment: str
    size: int
    ns_per_value: float
    binds_per_value: object = None   # filled by the instrumented pass
    samples_per_value: object = None
    flagged: bool = False            # timer resolution insufficient


def _runner_for(wl, treatment):
    if treatment.backend == "baseline":
        gen = wl.make_baseline()
        return lambda size, seed: gen.run(size, seed)
    gen = compiled_for(wl)
    return lambda size, seed: gen.run(size, seed)


def _measure(run, master, size, min_duration_s):
    """Steady-state ns/value: fresh split seed per iteration, adaptive
    batching, warmup excluded."""
    for _ in range(3):  # warmup
        run(size, master.split())
    batch = 1
    total_ns = 0
    values = 0
    min_ns = int(min_duration_s * 1e9)
    with _quiet_timing():
        while total_ns < min_ns:
            t0 = time.perf_counter_ns()
            for _ in range(batch):
                run(size, master.split())
            dt = time.perf_counter_ns() - t0
            total_ns += dt
            values += batch
            if dt < 5_000_000 and batch < 1 << 20:
                batch *= 2
    return total_ns / values, values


def bench_workload(workload, treatments=TREATMENTS, sizes=(10, 100, 1000, 10000),
                   min_duration_s=0.5, instrument_size=100,
                   instrument_values=30):
    """BenchRows for one workload across treatments and sizes.  A separate
    unmeasured instrumented pass fills binds/samples per value on the rows
    whose size equals instrument_size."""
    wl = get_workload(workload) if isinstance(workload, str) else workload

    def run():
        rows = []
        for treatment in treatments:
            runner = _runner_for(wl, treatment)
            for size in sizes:
                master = seed_of_u64(
                    stable_u64("bench|%s|%d" % (wl.name, size)), treatment.prng)
                ns, values = _measure(runner, master, size, min_duration_s)
                flag = values < 5 or ns <= 0
                row = BenchRow(wl.name, treatment.name, size, ns, flagged=flag)
                if size == instrument_size:
                    imaster = seed_of_u64(
                        stable_u64("bench|%s|%d" % (wl.name, size)),
                        treatment.prng, instrument=True)
                    binds = samples = 0
                    for _ in range(instrument_values):
                        child = imaster.split()
                        runner(size, child)
                        binds += child.bind_count
                        samples += child.sample_count
                    row.binds_per_value = binds / instrument_values
                    row.samples_per_value = samples / instrument_values
                rows.append(row)
        return rows

    return call_with_headroom(run)


def bench_prng_cores(n_calls=200_000):
    """Per-call cost of the seed implementations, in isolation: the
    compiled fast core (when present), its pure-Python twin, and the
    deliberately indirected slow variant."""
    from . import rand as _rand

    cores = []
    if _rand.COMPILED_CORE:
        cores.append(("fast-compiled", _rand.FastSeed))
    cores.append(("fast-python", FastSeedPy))
    cores.append(("slow-python", IndirectSeed))

    rows = []
    with _quiet_timing():
        for name, cls in cores:
            seed = cls(12345)
            nxt = seed.next_u64
            for _ in range(1000):
                nxt()
            t0 = time.perf_counter_ns()
            for _ in range(n_calls):
                nxt()
            ns_next = (time.perf_counter_ns() - t0) / n_calls
            rng = seed.int_in_range
            t0 = time.perf_counter_ns()
            for _ in range(n_calls // 4):
                rng(0, 100)
            ns_range = (time.perf_counter_ns() - t0) / (n_calls // 4)
            rows.append((name, "next_u64", ns_next))
            rows.append((name, "int_in_range_0_100", ns_range))
    return rows


# ---------------------------------------------------------------------------
# bug-finding protocol


@dataclass(frozen=True)
class Outcome:
    task: object
    treatment: str
    seed_id: int
    found: bool
    ns: int
    values_tried: int


_TASK_GEN_CACHE = {}


def _task_runner(task, backend):
    """Input generator for (workload, property) under one backend; staged
    side compiled once and cached."""
    prop = get_property(task.prop)
    key = (task.workload, prop.shape, backend)
    if key not in _TASK_GEN_CACHE:
        gen = property_input_gen(prop, task.workload, backend)
        if backend == "staged":
            from .lower import compile_gen
            cg = compile_gen(gen)
            _TASK_GEN_CACHE[key] = lambda size, seed: cg.run(size, seed)
        else:
            _TASK_GEN_CACHE[key] = lambda size, seed: gen.run(size, seed)
    return _TASK_GEN_CACHE[key]


def run_task(task, treatment, seed_id, timeout_s=10.0, max_size=50):
    """Generate inputs until the paired property fails on the mutant, or
    the timeout passes.  Value sizes cycle 0..max_size.  The master seed is
    derived from (task, seed_id) only, so treatments replay one stream."""
    prop = get_property(task.prop)
    mutant = get_mutant(task.mutant)
    ops = make_ops(mutant)
    check = prop.check
    runner = _task_runner(task, treatment.backend)
    master = seed_of_u64(stable_u64("etna|%s|%d" % (task.id, seed_id)),
                         treatment.prng)

    def run():
        sizes = max_size + 1
        tried = 0
        with _quiet_timing():
            t0 = time.perf_counter_ns()
            deadline = t0 + int(timeout_s * 1e9)
            while True:
                args = runner(tried % sizes, master.split())
                tried += 1
                if check(ops, args) is False:
                    return Outcome(task, treatment.name, seed_id, True,
                                   time.perf_counter_ns() - t0, tried)
                if time.perf_counter_ns() >= deadline:
                    return Outcome(task, treatment.name, seed_id, False,
                                   time.perf_counter_ns() - t0, tried)

    return call_with_headroom(run)


def run_suite(tasks=None, treatments=TREATMENTS, seed_ids=range(10),
              timeout_s=10.0, max_size=50, progress=None):
    tasks = list(all_tasks()) if tasks is None else list(tasks)

    def run():
        outcomes = []
        for task in tasks:
            for seed_id in seed_ids:
                for treatment in treatments:
                    out = run_task(task, treatment, seed_id, timeout_s,
                                   max_size)
                    outcomes.append(out)
                    if progress is not None:
                        progress(out)
        return outcomes

    return call_with_headroom(run)


# ---------------------------------------------------------------------------
# aggregation


def speedup(base, other):
    """baseline time / treatment time; None (with a reason) when the
    comparison is undefined."""
    if not base.found:
        return None, "baseline did not find the bug"
    if not other.found:
        return None, "treatment did not find the bug"
    if other.ns == 0:
        return None, "treatment time is zero"
    return base.ns / other.ns, None


def geo_mean(ratios):
    ratios = list(ratios)
    if not ratios:
        raise ValueError("geo_mean of no ratios")
    return math.exp(sum(math.log(r) for r in ratios) / len(ratios))


def filter_tasks(outcomes, baseline_treatment=BASELINE_FAST,
                 threshold_ns=5_000_000):
    """Partition (task, seed) groups into retained and removed.

    Removal rules: (a) no treatment found the bug; (b) the baseline
    treatment found it in under threshold_ns -- negligible run time --
    unless exactly one treatment succeeded, which is a signal we always
    keep.  Returns (retained keys, {key: reason})."""
    groups = {}
    for o in outcomes:
        groups.setdefault((o.task, o.seed_id), []).append(o)
    retained = []
    removed = {}
    for key, outs in groups.items():
        found = [o for o in outs if o.found]
        if not found:
            removed[key] = "all treatments timed out"
            continue
        base = next((o for o in outs
                     if o.treatment == baseline_treatment.name), None)
        if (len(found) >= 2 and base is not None and base.found
                and base.ns < threshold_ns):
            removed[key] = "baseline under %d ms" % (threshold_ns // 1_000_000)
            continue
        retained.append(key)
    return retained, removed


def per_task_speedups(outcomes, denom=BASELINE_FAST, numer=STAGED_FAST,
                      threshold_ns=5_000_000):
    """Speedup of `numer` over `denom` per retained (task, seed); excluded
    comparisons carry their reason."""
    retained, removed = filter_tasks(outcomes, denom, threshold_ns)
    by_key = {}
    for o in outcomes:
        by_key.setdefault((o.task, o.seed_id), {})[o.treatment] = o
    ratios = {}
    excluded = dict(removed)
    for key in retained:
        outs = by_key[key]
        if denom.name not in outs or numer.name not in outs:
            excluded[key] = "treatment not run"
            continue
        ratio, reason = speedup(outs[denom.name], outs[numer.name])
        if ratio is None:
            excluded[key] = reason
        else:
            ratios[key] = ratio
    return ratios, excluded


def spearman_rho(xs, ys):
    """Rank correlation with average ranks on ties."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two same-length samples")

    def ranks(vals):
        order = sorted(range(len(vals)), key=lambda i: vals[i])
        r = [0.0] * len(vals)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and vals[order[j + 1]] == vals[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                r[order[k]] = avg
            i = j + 1
        return r

    rx, ry = ranks(xs), ranks(ys)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if dx == 0 or dy == 0:
        return 0.0
    return num / (dx * dy)
