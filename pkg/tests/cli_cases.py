"""Command lines covered by the golden reports in tests/golden."""

CASES = {
    "free-1-f2": ["free", "--d", "1", "--N", "3", "--coeff", "f2"],
    "free-disc": ["free", "--d", "1", "--N", "3", "--coeff", "discrete:f2:r1,r2", "--obj", "r2"],
    "shift": ["shift", "--in", "corpus:free-1-f3", "--a", "2"],
    "tadj": ["tadj", "--in", "corpus:atomic-1-f3", "--a", "1"],
    "h0": ["h0", "--in", "corpus:free-2-q"],
    "h0-zero": ["h0", "--in", "corpus:zero-f2"],
    "gen-degree": ["gen-degree", "--in", "corpus:mixed-z"],
    "homology": ["homology", "--in", "corpus:atomic-0-f2", "--a", "2"],
    "stable-range": ["stable-range", "--in", "corpus:atomic-0-z"],
    "extend": ["extend", "--in", "corpus:twisted-z", "--N", "7"],
    "torsion-sub": ["torsion-sub", "--in", "corpus:atomic-0-z", "--theory", "ztorsion"],
    "membership": ["membership", "--in", "corpus:mixed-z", "--theory", "p-primary:2"],
    "filtration": ["filtration", "--in", "corpus:twisted-z", "--theory", "ztorsion", "--n", "2"],
    "envelope": ["envelope", "--in", "corpus:disc-mixed", "--theory", "support:r1"],
    "lk": ["lk", "--in", "corpus:atomic-0-disc", "--theory", "support:r2", "--k", "2"],
    "closed-check": ["closed-check", "--in", "corpus:free-1-r1-disc", "--theory", "support:r2",
                     "--trials", "5", "--seed", "3"],
    "check": ["check", "--suite", "6,14", "--seed", "7"],
    "corpus": ["corpus"],
    "corpus-entry": ["corpus", "--name", "atomic-0-z"],
}
