"""Quick end-to-end check of the Python bindings."""

import json

import cardtricks_py as ct


def main():
    assert ct.bounds("cheney", 5) == 52
    assert ct.bounds("line-assistant", 4, r=2) == 195
    assert ct.sequence("A002720", 6) == [1, 2, 7, 34, 209, 1546]
    assert ct.table("T5").splitlines()[1].split("\t")[:5] == ["1", "1", "4", "15", "52"]

    three = ct.Codec("three-card")
    assert three.encode("7D QH 3S") == ("7D", "L QH:u1 3S:d0")
    assert three.decode("L QH:u1 ?:d0") == "7D"

    cheney = ct.Codec("cheney5")
    hidden, message = cheney.encode("AS 2S 3S 4S 5S")
    assert cheney.decode(message) == hidden
    report = cheney.verify(sample=2000, seed=7)
    assert report["passed"] and report["cases"] == 2000

    two = ct.Codec("two-hidden-audience", k=5, n=7, one_based=True)
    assert two.audience_chooses
    _, message = two.encode("2 3 4 5 6", hidden="3 5")
    assert two.decode(message) == "3 5"

    rows = ct.synthesize("line-assistant", 3, 8).splitlines()
    assert len(rows) == 57 and "hand" in json.loads(rows[1])
    assert ct.synthesize("line-assistant", 3, 9) is None
    assert ct.max_deck("flip-audience", 3) == 7

    try:
        ct.Codec("best-trick", k=3, n=9).encode("0 1 2")
    except ct.CardTrickError as e:
        assert "capacity" in str(e)
    else:
        raise AssertionError("oversized deck accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
