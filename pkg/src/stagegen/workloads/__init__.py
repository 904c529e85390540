"""Benchmark workloads: generators, reference system-under-test operations,
injected bugs, and correctness properties."""

from .registry import (  # noqa: F401
    MUTANTS,
    PROPERTIES,
    WORKLOADS,
    Mutant,
    Property,
    Task,
    Workload,
    all_tasks,
    get_mutant,
    get_property,
    get_workload,
    make_ops,
    property_input_gen,
)
