"""Smoke test of the hardness_py extension module.

Build and install first:
    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
"""

import hardness_py as h


def main():
    f = h.ClauseSet([[1], [-1, 2], [-1, -2]])
    assert f.n == 2 and f.c == 3 and len(f) == 3
    assert not f.is_satisfiable()
    assert h.measure(f, "hd") == 1
    assert h.measure(f, "whd") == 1
    assert h.measure(f, "wid") == 2
    assert h.measure(f, "semspace") == 2

    back = h.ClauseSet.from_dimacs(f.to_dimacs())
    assert back == f

    php = h.generate("php", [3, 2])
    report = h.verify(php, "php(3,2)")
    assert report["measures"]["hardness"] == 2
    assert report["measures"]["tree_space"] == 3
    assert all(r["holds"] is not False for r in report["relations"])

    r = h.measure_report(php, "hd", witness=True)
    assert r["value"] == 2 and r["witness"]["type"] == "proof"

    assert h.game_value(php, "hd") == 2
    assert h.game_value(php, "whd") == 2
    transcript = h.play_optimal(php, "hd")
    assert transcript[-1]["score_so_far"] == 2

    assert h.exists_family(php, "k_consistent", 1)
    assert not h.exists_family(php, "k_consistent", 2)

    assert h.reduce(f, 1)["refuted"]
    sat = h.ClauseSet([[1, 2], [1, -2]])
    assert sat.prime_implicates().clauses() == [[1]]
    assert h.measure(sat, "hd") == 1
    assert sorted(sat.apply([(1, False)]).clauses()) == [[-2], [2]]

    assert len(h.exhaustive_corpus(2)) == 5
    assert h.probe("ss_factor", 10, 1)["instances"] == 10

    try:
        h.measure(h.generate("php", [4, 3]), "semspace")
    except OverflowError:
        pass
    else:
        raise AssertionError("expected a cap refusal")
    try:
        h.ClauseSet([[1, -1]])
    except ValueError:
        pass
    else:
        raise AssertionError("expected a tautology error")

    print("smoke test passed")


if __name__ == "__main__":
    main()
