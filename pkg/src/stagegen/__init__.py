"""stagegen: property-based-testing generators, two seed-pointwise-equivalent
backends (a naive monadic interpreter and a staging backend that compiles
generator structure into flat programs), a bit-exact splittable PRNG in fast
and deliberately slow variants, and a measurement harness."""

__version__ = "0.1.0"
