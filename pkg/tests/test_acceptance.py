"""End-to-end acceptance sweep: one test per shipped guarantee.

Each test prints a PASS/FAIL line through the ``criterion`` reporter in
conftest; randomness is seeded so failures replay byte-for-byte.  Time
budgets are asserted where the guarantee includes one, measured around the
checking loop only (pool construction is setup, not the contract).
"""

import math
import random
import time
from fractions import Fraction

from oracle_splitting import oracle_split

from conftest import criterion
from picmonoid import (
    INF,
    Adele,
    ArithmeticDivisor,
    FiniteAdele,
    Frame,
    PrimeSet,
    TorusPoint,
    TruncatedPadic,
    adele_multiply,
    adele_to_divisor,
    cover_from_character,
    cp_identity,
    cp_inverse,
    cp_product,
    dist_trace,
    divisor_add,
    divisor_from_rational,
    factorize_fraction,
    fiber_decomposition,
    fiber_point,
    is_inf,
    jac_product,
    jac_theta,
    load_zero_table,
    padic_from_rational,
    pic_equal,
    pic_from_data,
    pic_product,
    primes_up_to,
    product_formula_holds,
    root_consistency_check,
    root_tensor_check,
    sections_contains,
    semilocal_rhs,
    theta_class,
    torus_normalize,
    value_spectrum_sample,
    verify_zero_ordinate,
    weil_balance,
    windowed_cosine,
    xq_class,
)

POOL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]


# -- seeded generators ---------------------------------------------------------


def rand_fraction(rng, hi=12, max_den=12):
    num = rng.randint(1, hi) * rng.choice([1, -1])
    return Fraction(num, rng.randint(1, max_den))


def rand_padic(rng, p):
    mode = rng.randrange(4)
    if mode == 0:
        return padic_from_rational(p, 0)
    if mode <= 2:
        return padic_from_rational(p, rand_fraction(rng))
    prec = rng.randint(1, 5)
    unit = rng.randrange(1, p**prec)
    while unit % p == 0:
        unit = rng.randrange(1, p**prec)
    return TruncatedPadic(p, rng.randint(-4, 4), unit, prec)


def rand_finite_adele(rng, max_comps=2):
    primes = rng.sample(POOL_PRIMES, rng.randint(0, max_comps))
    comps = {p: rand_padic(rng, p) for p in primes}
    default = Fraction(1) if rng.random() < 0.5 else rand_fraction(rng)
    return FiniteAdele(comps, default)


def rand_adele(rng, zero_arch_odds=0.0):
    arch = Fraction(0) if rng.random() < zero_arch_odds else rand_fraction(rng)
    return Adele(rand_finite_adele(rng), arch)


def rand_unit_idele(rng, max_comps=2):
    primes = rng.sample(POOL_PRIMES, rng.randint(0, max_comps))
    comps = {}
    for p in primes:
        num = rng.randint(1, 30)
        while num % p == 0:
            num = rng.randint(1, 30)
        den = rng.randint(1, 30)
        while den % p == 0:
            den = rng.randint(1, 30)
        comps[p] = padic_from_rational(p, Fraction(num, den))
    return FiniteAdele(comps, 1)


def rand_divisor(rng, max_primes=3, coeff_hi=3):
    primes = rng.sample(POOL_PRIMES, rng.randint(0, max_primes))
    explicit = {}
    for p in primes:
        explicit[p] = INF if rng.random() < 0.25 else rng.randint(-coeff_hi, coeff_hi)
    default = INF if rng.random() < 0.2 else 0
    return ArithmeticDivisor(explicit, default)


def rand_frame(rng, max_comps=2):
    primes = rng.sample(POOL_PRIMES, rng.randint(0, max_comps))
    comps = {}
    for p in primes:
        if rng.random() < 0.3:
            comps[p] = padic_from_rational(p, 0)
        else:
            unit = rng.randint(1, 12)
            while unit % p == 0:
                unit = rng.randint(1, 12)
            comps[p] = padic_from_rational(p, Fraction(p) ** rng.randint(-3, 3) * unit)
    return Frame(FiniteAdele(comps, 1), rand_fraction(rng))


def rand_section(rng, d):
    """A random element of L(d), built directly from the coefficient bounds."""
    x = Fraction(rng.randint(1, 10)) * rng.choice([1, -1])
    for p, c in d.explicit.items():
        if is_inf(c):
            x *= Fraction(p) ** -rng.randint(0, 2)
        else:
            x *= Fraction(p) ** (-c + rng.randint(0, 1))
    if is_inf(d.default) and rng.random() < 0.3:
        x /= rng.choice([29, 31, 37])
    return x


def split_section(s, d1, d2):
    """Factor a section of d1+d2 into sections of the parts, by valuations.

    Primes with net exponent zero still need attention when one part has a
    negative coefficient there (its sections must carry positive valuation).
    """
    x = Fraction(1) if s > 0 else Fraction(-1)
    y = Fraction(1)
    exponents = factorize_fraction(s)
    for p in sorted(set(exponents) | set(d1.explicit) | set(d2.explicit)):
        e = exponents.get(p, 0)
        n1, n2 = d1.coefficient(p), d2.coefficient(p)
        if not is_inf(n2):
            a = e + n2
        elif not is_inf(n1):
            a = -n1
        else:
            a = e
        x *= Fraction(p) ** a
        y *= Fraction(p) ** (e - a)
    return x, y


# -- criteria ------------------------------------------------------------------


def test_criterion_01_divisor_adele_homomorphism():
    rng = random.Random(101)
    pool = [rand_finite_adele(rng) for _ in range(400)]
    images = [adele_to_divisor(a) for a in pool]
    pairs = [(rng.randrange(400), rng.randrange(400)) for _ in range(10_000)]
    with criterion(1, "adele products map to divisor sums (10k pairs)"):
        start = time.perf_counter()
        for i, j in pairs:
            product = pool[i].multiply(pool[j])
            assert adele_to_divisor(product) == divisor_add(images[i], images[j])
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"homomorphism sweep took {elapsed:.2f}s"


def test_criterion_02_tensor_section_law():
    rng = random.Random(102)
    with criterion(2, "section products land in the sum; sums factor (1k pairs)"):
        start = time.perf_counter()
        for _ in range(1_000):
            d1, d2 = rand_divisor(rng), rand_divisor(rng)
            dsum = divisor_add(d1, d2)
            for _ in range(100):
                x, y = rand_section(rng, d1), rand_section(rng, d2)
                assert sections_contains(dsum, x * y)
            for _ in range(20):
                s = rand_section(rng, dsum)
                x, y = split_section(s, d1, d2)
                assert x * y == s
                assert sections_contains(d1, x) and sections_contains(d2, y)
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"tensor sweep took {elapsed:.2f}s"


def test_criterion_03_class_invariance_and_multiplicativity():
    rng = random.Random(103)
    with criterion(3, "adele class map: orbit-invariant and multiplicative"):
        for k in range(1_000):
            a = rand_adele(rng, zero_arch_odds=0.05 if k % 4 == 0 else 0.0)
            q = rand_fraction(rng)
            u = rand_unit_idele(rng)
            translated = Adele(
                a.finite.multiply(FiniteAdele.from_rational(q)).multiply(u),
                a.infinite * q)
            assert xq_class(translated) == xq_class(a)
        for _ in range(1_000):
            a, b = rand_adele(rng), rand_adele(rng)
            assert xq_class(adele_multiply(a, b)) == pic_product(xq_class(a), xq_class(b))


def test_criterion_04_spectrum_reconstruction():
    rng = random.Random(104)
    caps = {p: 5 for p in POOL_PRIMES}
    bound = Fraction(100)

    def base_class(rng, locus_prime):
        explicit = {}
        if locus_prime is not None:
            explicit[locus_prime] = INF
        carrier = rng.choice([5, 7])
        explicit[carrier] = rng.randint(0, 1)
        lam = rng.choice([Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)])
        return ArithmeticDivisor(explicit, 0), lam

    rows = []
    for k in range(500):  # equal pairs: same class reached via a translate
        locus_prime = rng.choice([None, None, 2, 3])
        d, lam = base_class(rng, locus_prime)
        q = rng.choice([Fraction(1), Fraction(5), Fraction(7), Fraction(5, 7),
                        Fraction(35), Fraction(1, 5)])
        c1 = pic_from_data(d, lam)
        c2 = pic_from_data(divisor_add(d, divisor_from_rational(q)), lam / q)
        rows.append((c1, c2, True))
    for k in range(500):  # perturbed pairs: scale bump, new locus, or swapped locus
        locus_prime = rng.choice([None, None, 2, 3])
        d, lam = base_class(rng, locus_prime)
        c1 = pic_from_data(d, lam)
        kind = rng.random()
        if locus_prime is None and kind < 0.4:
            bumped = divisor_add(d, ArithmeticDivisor({rng.choice([2, 3]): INF}))
            c2 = pic_from_data(bumped, lam)
        elif locus_prime is not None and kind < 0.4:
            swapped = ArithmeticDivisor(
                {(5 - locus_prime): INF,
                 **{p: c for p, c in d.explicit.items() if p != locus_prime}}, 0)
            c2 = pic_from_data(swapped, lam)
        else:
            # the locus primes are absorbed into the canonical scale, so the
            # perturbing factor must be supported away from them
            factor = rng.choice([Fraction(5), Fraction(7), Fraction(5, 7),
                                 Fraction(7, 5), Fraction(1, 5), Fraction(1, 7)])
            c2 = pic_from_data(d, lam * factor)
        rows.append((c1, c2, False))

    with criterion(4, "value spectra agree exactly iff the classes are equal"):
        for c1, c2, expect_equal in rows:
            equal = pic_equal(c1, c2)
            assert equal == expect_equal
            s1 = value_spectrum_sample(c1, bound, caps)
            s2 = value_spectrum_sample(c2, bound, caps)
            assert (s1 == s2) == equal


def test_criterion_05_theta_semilattice():
    rng = random.Random(105)
    sets = [PrimeSet(frozenset(rng.sample(POOL_PRIMES, rng.randint(0, 4))),
                     rng.random() < 0.3)
            for _ in range(200)]
    with criterion(5, "theta classes: idempotent, product matches union"):
        for s in sets:
            t = theta_class(s)
            assert pic_equal(pic_product(t, t), t)
            j = jac_theta(s)
            assert jac_product(j, j) == j
        for _ in range(200):
            s1, s2 = rng.choice(sets), rng.choice(sets)
            assert pic_equal(pic_product(theta_class(s1), theta_class(s2)),
                             theta_class(s1.union(s2)))
            assert jac_product(jac_theta(s1), jac_theta(s2)) == jac_theta(s1.union(s2))


def test_criterion_06_duality_monoidal():
    rng = random.Random(106)
    cases = []
    for _ in range(1_000):
        f1, f2 = rand_frame(rng), rand_frame(rng)
        n = rng.randint(2, 10_000)
        cases.append((f1, f2, n, rand_section(rng, f1.divisor),
                      rand_section(rng, f2.divisor)))
    with criterion(6, "root of a tensor = levelwise product of roots (1k pairs)"):
        start = time.perf_counter()
        for f1, f2, n, x, y in cases:
            assert root_tensor_check(f1, f2, n, x, y)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"duality sweep took {elapsed:.2f}s"


def test_criterion_07_root_consistency():
    rng = random.Random(107)
    with criterion(7, "level-n root equals k times the level-nk root (5k cases)"):
        for _ in range(5_000):
            f = rand_frame(rng)
            n, k = rng.randint(1, 100), rng.randint(1, 100)
            assert root_consistency_check(f, n, k, rand_section(rng, f.divisor))


def test_criterion_08_cover_splitting_oracle():
    covers = [(m, (1,)) for m in (3, 4, 5, 7, 8, 12)]
    covers += [(5, (1, 4)), (8, (1, 7)), (12, (1, 7))]
    with criterion(8, "splitting data matches the factorization oracle, p < 1000"):
        start = time.perf_counter()
        checked = 0
        for m, kernel in covers:
            cover = cover_from_character(m, list(kernel))
            ramified, _ = ramified_primes(cover)
            for p in primes_up_to(1000):
                if p in ramified or m % p == 0:
                    continue
                fib = fiber_decomposition(cover, p)
                assert oracle_split(m, kernel, p) == (fib.components, fib.degree), \
                    (m, kernel, p)
                checked += 1
        elapsed = time.perf_counter() - start
        assert checked > 1_000
        assert elapsed < 30.0, f"splitting sweep took {elapsed:.2f}s"


def ramified_primes(cover):
    from picmonoid import ramified_set

    finite, arch = ramified_set(cover)
    return set(finite.sorted_members()), arch


def test_criterion_09_circle_group_and_torus():
    rng = random.Random(109)
    with criterion(9, "fiber circle-group laws (10k triples) and torus normal form"):
        for k in range(10_000):
            place = "eta" if k % 5 == 0 else rng.choice(POOL_PRIMES)
            x, y, z = (fiber_point(place, Fraction(rng.randint(1, 40),
                                                   rng.randint(1, 40)))
                       for _ in range(3))
            assert cp_product(cp_product(x, y), z) == cp_product(x, cp_product(y, z))
            assert cp_product(x, cp_identity(place)) == x
            assert cp_product(x, cp_inverse(x)) == cp_identity(place)
        arch = fiber_point("arch")
        assert cp_product(arch, arch) == arch == cp_inverse(arch)

        for _ in range(1_000):
            p = rng.choice([2, 3, 5, 7])
            comps = {}
            for q in rng.sample([11, 13, 17], rng.randint(0, 2)):
                unit = rng.randint(1, 9)
                while unit % q == 0:
                    unit = rng.randint(1, 9)
                comps[q] = padic_from_rational(q, unit)
            default = Fraction(p) ** rng.randint(-2, 2) * rng.choice([1, -1])
            pt = TorusPoint(p, FiniteAdele(comps, default),
                            Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3, 4])))
            normal = torus_normalize(pt)
            assert 0 <= normal.time_exponent < 1
            assert torus_normalize(normal) == normal
            j = rng.randint(-3, 3)
            assert torus_normalize(pt.apply_relation(j)) == normal
            assert pt.apply_relation(j).apply_relation(-j) == pt


def test_criterion_10_explicit_formula_balance():
    table = load_zero_table()
    family = [windowed_cosine(omega, 0.0, 5.0)
              for omega in (0, 3, 6, 9, 12, 15, 18, 21, 25, 30)]
    with criterion(10, "balance residuals within tail bounds on 100 zeros"):
        start = time.perf_counter()
        for gamma in table.first(100):
            ok, mag = verify_zero_ordinate(gamma, 1e-8)
            assert ok, f"ordinate {gamma} only certified to {mag:.2e}"
        improved = 0
        for g in family:
            full = weil_balance(g, table, 100)
            coarse = weil_balance(g, table, 10)
            allowed = max(1e-2, full.tail_bound if full.tail_bound else 0.0)
            assert full.residual <= allowed, (g.spec_string(), full.residual, allowed)
            improved += full.residual <= coarse.residual
        assert improved >= 9, f"only {improved}/10 residuals improved with more zeros"

        g = family[3]
        g0 = float(g(0.0))
        baseline = semilocal_rhs(g, 1.0, ["inf", 2, 3]).finite_terms
        for scale in (0.5, 1.0, 2.0, 7.0, 10.0):
            report = semilocal_rhs(g, scale, ["inf", 2, 3])
            assert report.divergent == 2.0 * g0 * math.log(scale)
            assert report.finite_terms == baseline
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"balance suite took {elapsed:.2f}s"


def test_criterion_11_product_formula():
    rng = random.Random(111)
    with criterion(11, "product of |1-u| over all places is exactly 1 (1k cases)"):
        done = 0
        while done < 1_000:
            u = rand_fraction(rng, hi=400, max_den=400)
            if u == 1:
                continue
            assert product_formula_holds(u)
            finite = Fraction(1)
            for p in factorize_fraction(Fraction(1) - u):
                finite *= Fraction(dist_trace(u, p))
            assert finite == abs(Fraction(1) - u)
            assert math.isclose(dist_trace(u, "inf") * float(finite), 1.0,
                                rel_tol=1e-12)
            done += 1
