import time
from contextlib import contextmanager
from fractions import Fraction

from hypothesis import settings, strategies as st

from picmonoid import (
    INF,
    Adele,
    ArithmeticDivisor,
    FiniteAdele,
    Frame,
    PrimeSet,
    padic_from_rational,
)

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

primes_st = st.sampled_from(SMALL_PRIMES)

nonzero_rationals = st.builds(
    Fraction,
    st.integers(min_value=-60, max_value=60).filter(lambda n: n != 0),
    st.integers(min_value=1, max_value=60),
)

positive_rationals = st.builds(
    Fraction,
    st.integers(min_value=1, max_value=60),
    st.integers(min_value=1, max_value=60),
)

coefficients = st.integers(min_value=-5, max_value=5) | st.just(INF)

prime_sets = st.builds(
    PrimeSet,
    st.frozensets(primes_st, max_size=4),
    st.booleans(),
)


@st.composite
def divisors_st(draw, allow_inf=True, max_primes=4):
    n = draw(st.integers(min_value=0, max_value=max_primes))
    chosen = draw(st.permutations(SMALL_PRIMES))[:n]
    coeff = coefficients if allow_inf else st.integers(min_value=-5, max_value=5)
    explicit = {p: draw(coeff) for p in chosen}
    default = INF if (allow_inf and draw(st.booleans())) else 0
    return ArithmeticDivisor(explicit, default)


@st.composite
def padics_st(draw, prime=None):
    p = prime if prime is not None else draw(primes_st)
    mode = draw(st.integers(min_value=0, max_value=3))
    if mode == 0:
        return padic_from_rational(p, 0)
    if mode == 1:
        q = draw(nonzero_rationals)
        return padic_from_rational(p, q)
    prec = draw(st.integers(min_value=1, max_value=6))
    v = draw(st.integers(min_value=-4, max_value=4))
    unit = draw(st.integers(min_value=1, max_value=p**prec - 1).filter(
        lambda u: u % p != 0))
    from picmonoid import TruncatedPadic

    return TruncatedPadic(p, v, unit, prec)


@st.composite
def finite_adeles_st(draw, exact_only=False, max_comps=3):
    n = draw(st.integers(min_value=0, max_value=max_comps))
    chosen = draw(st.permutations(SMALL_PRIMES))[:n]
    explicit = {}
    for p in chosen:
        if exact_only:
            q = draw(nonzero_rationals | st.just(Fraction(0)))
            explicit[p] = padic_from_rational(p, q)
        else:
            explicit[p] = draw(padics_st(prime=p))
    default = draw(st.just(Fraction(1)) | nonzero_rationals)
    return FiniteAdele(explicit, default)


@st.composite
def adeles_st(draw, **kw):
    return Adele(draw(finite_adeles_st(**kw)), draw(nonzero_rationals))


@st.composite
def frames_st(draw, max_comps=2):
    """Tight frames: multiplier components generate what the divisor says."""
    n = draw(st.integers(min_value=0, max_value=max_comps))
    chosen = draw(st.permutations(SMALL_PRIMES))[:n]
    explicit = {}
    for p in chosen:
        kind = draw(st.integers(min_value=0, max_value=2))
        if kind == 0:
            explicit[p] = padic_from_rational(p, 0)  # singular at p
        else:
            e = draw(st.integers(min_value=-3, max_value=3))
            u = draw(st.integers(min_value=1, max_value=20).filter(lambda k: k % p))
            explicit[p] = padic_from_rational(p, Fraction(p) ** e * u)
    tau = draw(nonzero_rationals)
    return Frame(FiniteAdele(explicit, 1), tau)


# -- acceptance reporting -----------------------------------------------------

ACCEPTANCE_LINES = []


@contextmanager
def criterion(number, description):
    """Collects one PASS/FAIL line per acceptance criterion for the final
    terminal summary."""
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(
            f"FAIL  criterion {number:>2}: {description}")
        raise
    elapsed = time.perf_counter() - start
    ACCEPTANCE_LINES.append(
        f"PASS  criterion {number:>2}: {description}  [{elapsed:.2f}s]")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
