"""Smoke test for the kolmo_py extension module.

Build it first:

    cargo build -p kolmo-python --release

then run this script from the repository root. It copies the shared library
next to itself under the importable name when needed.
"""

import json
import pathlib
import shutil
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    here = pathlib.Path(__file__).resolve().parent
    target = here / "kolmo_py.so"
    built = ROOT / "target" / "release" / "libkolmo_py.so"
    if built.exists() and (not target.exists() or built.stat().st_mtime > target.stat().st_mtime):
        shutil.copyfile(built, target)
    sys.path.insert(0, str(here))
    import kolmo_py

    return kolmo_py


def main():
    k = load()

    out = k.run("0000001", 0)
    assert (out.status, out.output, out.steps_used) == ("halted", "01", 2), out
    assert k.run("00").status == "parse-error"

    p = k.Program("0110100000011101")
    assert p.disassemble() == "0:LOADN LOOP OUT0 DEC END"
    assert p.run(20).output == "0" * 20
    assert len(k.Program.literal("101")) == 4

    try:
        k.run("012")
    except ValueError:
        pass
    else:
        raise AssertionError("non-bit character accepted")

    e = k.exact("0" * 20)
    assert (e.value, e.witness, e.certified) == (16, "0110100000011101", True), e
    assert k.upper_bound("0" * 20, stages=96).value == 21
    assert k.upper_bound("0" * 20, stages=97).value == 16
    assert k.delta0(20, 16) == 3

    v = k.classify("0" * 20, c=2)
    assert (v.kind, v.deficiency) == ("certified-non-random", 3), v
    assert k.classify("0000", c=0).kind == "certified-random"
    assert k.classify(k.pi_bits(64), c=0, stages=30).kind == "no-evidence-at-budget"

    table = k.Table(10)
    assert len(table) == 1024 and table.n == 10
    assert table.histogram() == [(11, 1024)]
    assert all(table.count_below(m) < 2 ** m for m in range(13))
    assert table.deficiency_fraction(1) < 0.5

    report = k.analyze("const0:", 200, 20, c=2)
    assert report["counts"]["certified_non_random"] == 10
    assert report["flagged_fraction"] == 1.0
    prng = k.analyze("sha1:", 2000, 10, c=1, table=table)
    assert prng["flagged_fraction"] < 0.30

    assert k.sha1_hex(b"abc") == "a9993e364706816aba3e25717850c26c9cd0d89d"
    assert k.sha1_hex(b"") == "da39a3ee5e6b4b0d3255bfef95601890afd80709"
    assert k.sha1_stream(b"abc", 8) == "11101101"
    assert k.pi_bits(16) == "0010010000111111"
    assert k.generate("alt:", 5) == "01010"

    cert = k.cert_issue("0" * 20, 16, 100_000)
    assert k.cert_verify(cert)["accepted"] is True
    edited = json.loads(cert)
    edited["statement"]["m"] = 17
    rejected = k.cert_verify(json.dumps(edited))
    assert rejected["rejection"]["witness_bits"] == "0110100000011101"
    try:
        k.cert_issue("", 1, 10)
    except k.DomainError:
        pass
    else:
        raise AssertionError("false statement certified")

    assert [k.chaitin_gap(c) for c in (0, 1, 10)] == [0, 2, 13]
    assert k.RunLimits(step_budget=50).step_budget == 50
    print("smoke test passed")


if __name__ == "__main__":
    main()
