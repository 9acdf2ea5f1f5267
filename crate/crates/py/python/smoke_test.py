"""Smoke test for the `oresme` extension module.

Build and run from the repository root:

    cargo build -p oresme-py --release
    cp target/release/liboresme.so crates/py/python/oresme.so
    python3 crates/py/python/smoke_test.py

or install with `maturin develop -m crates/py/Cargo.toml` and run the script.
"""

from fractions import Fraction

import oresme


def main():
    o6 = oresme.oresme_poly(6)
    assert o6.to_fraction() == "(x^4 - 4*x^2 + 3)/x^5", o6.to_fraction()
    assert o6.terms() == [(-1, "1/1"), (-3, "-4/1"), (-5, "3/1")]
    assert oresme.oresme_derivative(1).to_fraction() == "-1/x^2"

    # O_{n+1} = O_n - x^{-2} O_{n-1}
    x_inv2 = oresme.LaurentPoly([(-2, "1")])
    for n in range(1, 30):
        lhs = oresme.oresme_poly(n + 1)
        rhs = oresme.oresme_poly(n) - x_inv2 * oresme.oresme_poly(n - 1)
        assert lhs == rhs, n

    # 3^n O_n(3) = F_{2n}
    for n in range(0, 40):
        value = Fraction(oresme.oresme_eval(n, "3"))
        assert value * 3**n == oresme.fibonacci(2 * n), n

    digests = {oresme.evaluate(s, 60, "5/2") for s in ("recurrence", "matrix", "closed")}
    assert len(digests) == 1, digests
    exact = float(Fraction(digests.pop()))
    assert abs(oresme.evaluate("binet", 60, "5/2") - exact) <= 1e-12 * abs(exact)

    reports = oresme.run_catalog("quick")
    assert len(reports) == len(oresme.catalog_ids()) == 21
    assert not any(r["unexpected"] for r in reports)
    g3 = oresme.check_identity("G3_T", ["n=1..5"])
    assert g3["verdict"] == "fails" and any(w["params"] == {"n": 2} for w in g3["witnesses"])

    l1, l2 = oresme.lambda_roots(3.0)
    assert abs(l1 - (3 + 5**0.5) / 6) < 1e-15 and abs(l1 * l2 - 1 / 9) < 1e-15
    trace = oresme.ratio_limit_probe(2.0, 60)
    assert trace["verdict"] == "degenerate" and trace["remark_discrepancy"]
    assert oresme.product_reconstruct(24)["pass"]

    src = "O[n+1]*O[n-1] - O[n]^2 == -x^(-2*n) where n=1..50"
    assert oresme.dsl_check(src)["verdict"] == "holds"
    try:
        oresme.dsl_parse("O[n")
    except ValueError as e:
        assert str(e).startswith("1:4:"), e
    else:
        raise AssertionError("parse error expected")
    assert oresme.shipped_corpus().count("==") >= 19

    print("oresme smoke test: ok")


if __name__ == "__main__":
    main()
