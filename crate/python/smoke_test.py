"""Smoke test for the pgfr_py extension.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import cmath
from fractions import Fraction

import pgfr_py


def main():
    p4 = pgfr_py.Graph.path(4)
    assert p4.n == 4 and p4.family == "path"
    values = sorted(e.value for e in p4.spectrum())
    assert abs(values[-1] - (1 + 5 ** 0.5) / 2) < 1e-12

    # P4 ends revive fractionally; P14 (3, 9) is cospectral but never revives
    assert p4.decide(1, 4).is_pgfr
    p14 = pgfr_py.Graph.path(14)
    assert Fraction(p14.walk_constant(3, 9)) == -1
    cos = p14.cospectral(3, 9)
    assert cos.status == "strong" and cos.zero == [5, 10]
    verdict = p14.decide(3, 9)
    assert not verdict.is_pgfr and verdict.proj_gcd == 1 and verdict.witness

    walks = p4.walk_counts(1, 3, 4)
    assert walks[2] == (1, 2, 1)

    # C6 antipodal pair: perfect state transfer at pi/2
    c6 = pgfr_py.Graph.cycle(6)
    u = c6.evolve(cmath.pi / 2)
    assert abs(sum(abs(x) ** 2 for x in u[0]) - 1) < 1e-12
    assert c6.decide(0, 3).is_pgfr

    rev = p4.search_revival(1, 3, t_max=200.0)
    assert rev is not None and rev.leakage < 0.02 and rev.leakage <= rev.coarse_leakage
    assert abs(p4.leakage(1, 3, rev.t_best) - rev.leakage) < 1e-12

    assert pgfr_py.classify_cycle(12, 0, 6) == (False, "none")
    assert pgfr_py.classify_path(8, 1, 8, "observed")[0]
    assert pgfr_py.crosscheck("cycle", 20) == []
    assert (8, 1, 8, False, "PGFR") in pgfr_py.crosscheck("path", 8)

    g = pgfr_py.Graph.from_matrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert g.cospectral(0, 2).status == "strong"
    try:
        g.decide(0, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("general graphs have no exact decision")

    print("pgfr_py smoke test: ok")


if __name__ == "__main__":
    main()
