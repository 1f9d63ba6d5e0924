"""Smoke test for the pysenslab extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import pysenslab as ps


def main():
    f, certs = ps.g0(3)
    assert f.n == 6 and len(certs) == 3
    p = f.profile()
    assert (p["s0"], p["bs0"], p["s1"], p["C1"]) == (1, 3, 5, 5), p

    thm = ps.main_theorem(f)
    assert thm["passed"], thm

    g = ps.graph(f)
    assert g["weight_lemma"]["passed"] and g["adjacency_lemma"]["passed"]

    rows = ["110****", "**110**", "****111"]
    path = [ps.Certificate(r) for r in rows]
    h = ps.or_of_certificates(path)
    w = ps.witness(h, path)
    word = w["input"]
    assert not h(word)
    for pos in w["sensitive_bits"]:
        flipped = word[: pos - 1] + ("1" if word[pos - 1] == "0" else "0") + word[pos:]
        assert h(flipped)
    assert len(w["sensitive_bits"]) >= 3

    assert ps.BooleanFunction("fe", 3).block_sensitivity("000") == 3
    assert ps.BooleanFunction("e8", 3).block_sensitivity("000") == 1
    assert str(ps.Certificate("1*0")) == "1*0"

    report = ps.sweep(3)
    assert report["functions_checked"] == 256
    assert not report["violations_main_theorem"]

    try:
        ps.BooleanFunction("zz", 3)
    except ps.SenslabError:
        pass
    else:
        raise AssertionError("bad hex accepted")

    print("pysenslab smoke test: ok")


if __name__ == "__main__":
    main()
