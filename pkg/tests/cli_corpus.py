"""Command lines exercised by the CLI tests and the determinism check."""

from pathlib import Path

DATA = Path(__file__).parent / "data"

P1, P2, P3, QQ = (str(DATA / f) for f in ("p1.json", "p2.json", "p3.json", "qq.json"))

CORPUS = [
    ["resolve", P2, "--module", "euler"],
    ["resolve", P2, "--module", "k"],
    ["betti", P2, "--module", "euler"],
    ["betti", QQ, "--module", "conic"],
    ["hilbert", P2, "--module", "k"],
    ["hilbert", P2, "--module", "euler"],
    ["hilbert", QQ, "--module", "conic"],
    ["ext", P2, "--module", "euler"],
    ["cohomology-table", P2, "--module", "O", "--window", "-4..3"],
    ["cohomology-table", P2, "--module", "euler", "--window", "-5..2"],
    ["cohomology-table", P3, "--module", "line", "--window", "-3..2"],
    ["split-check", P2, "--module", "split"],
    ["split-check", P2, "--module", "euler"],
    ["horrocks-resolution", P2, "--module", "euler"],
    ["bgg-f", P2, "--complex", "E"],
    ["bgg-f", P2, "--complex", "pair"],
    ["bgg-g", P2, "--module", "O", "--window", "0..2"],
    ["minimalize", P2, "--complex", "pair"],
    ["minimalize", P2, "--complex", "koszul"],
    ["tate", P2, "--module", "O", "--window", "-2..2"],
    ["tate", P1, "--module", "twisted", "--window", "-3..3"],
    ["strands", P2, "--module", "euler", "--window", "-3..2"],
    ["ht", P2, "--module", "euler"],
    ["ht", P2, "--module", "O", "--window", "-3..3"],
    ["em-fixture", P2, "--module", "k", "--i", "1"],
    ["em-fixture", P3, "--module", "line", "--i", "1", "--window", "-4..2"],
]
