"""Smoke test for the `prefdb` extension module.

Build with `cargo build -p prefdb-py`, copy `target/debug/libprefdb.so` to
`python/prefdb.so`, then run `python3 python/smoke_test.py` from the repo root.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import prefdb

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main():
    db = prefdb.Database.load(str(DATA / "fig1.json"))
    assert db.validate() == [], db.validate()
    assert "Oct-5" in db.elections()

    q1 = prefdb.Query((DATA / "q1.pq").read_text())
    assert q1.is_boolean
    assert q1.classify() == "tractable-plurality"
    r = prefdb.necessary(db, q1)
    assert r["answer"] is True and r["method_used"] == "poly", r

    q3 = prefdb.Query((DATA / "q3.pq").read_text())
    r = prefdb.necessary(db, q3)
    assert r["method_used"] == "brute" and r["completions_examined"] > 0, r

    w = prefdb.Query((DATA / "winners.pq").read_text())
    rows = prefdb.possible(db, w)["answer"]
    assert len(rows) == 3 and all(isinstance(t, tuple) for t in rows), rows

    assert prefdb.winners(db, "Oct-5", "borda") == ["Clinton"]
    assert prefdb.winners(db, "Oct-5", "plurality") == []
    assert prefdb.winners(db, "Oct-5", "plurality", mode="possible") == ["Clinton", "Johnson", "Trump"]
    assert prefdb.completion_count(db, "Oct-5") == 4
    assert len(prefdb.completions(db, "Oct-5")) == 4

    again = prefdb.Database.from_json(db.to_json())
    assert again.elections() == db.elections()

    gdb, gq, expected = prefdb.generate_qh("a b\nb c\na c", 2)
    assert prefdb.necessary(gdb, gq)["answer"] is expected is True

    tdb, tq, expected = prefdb.generate_tautology("x1 x1 x1\n!x1 !x1 !x1", "borda")
    assert prefdb.necessary(tdb, tq)["answer"] is expected is True

    try:
        prefdb.Query("q() :- Winner(plurality")
    except prefdb.PrefdbError:
        pass
    else:
        raise AssertionError("parse error expected")

    try:
        prefdb.necessary(db, q3, method="poly")
    except prefdb.PrefdbError:
        pass
    else:
        raise AssertionError("poly on a hard query should fail")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
