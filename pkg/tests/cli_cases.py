"""Command-line invocations pinned by golden outputs in data/golden."""

CASES = {
    "dim_z2cube": ("z2cube.def", ["dim", "Z2cube"]),
    "verify_bad_bivector": ("bivector.def", ["verify", "BadBivector"]),
    "span_empty": ("z2cube.def", ["span", "Z2cubeVS", "--set", "{}"]),
    "verify_idem": ("z2cube.def", ["verify", "Idem"]),
    "verify_z2cube": ("z2cube.def", ["verify", "Z2cube"]),
    "independent_z2cube": ("z2cube.def", ["independent", "Z2cube", "--set", "{(1,0,0),(0,1,0),(1,1,0)}"]),
    "simple_z6cube": ("corpus.def", ["simple", "Z6cube"]),
    "decompose_z14cube": (
        "corpus.def",
        ["decompose", "Z14cube", "--parts", "pattern((1,0,0));pattern((0,1,0));pattern((0,0,1))"],
    ),
    "sub_classify": ("corpus.def", ["sub", "Z6cube", "--set", "{(0,0,0),(1,1,1),(2,2,2),(4,4,4)}", "--classify"]),
    "homs_bit": ("corpus.def", ["homs", "Bit", "Bit"]),
    "project_dbl": ("corpus.def", ["project", "Dbl", "--onto", "pattern((2,0,0,0),(0,2,0,0))"]),
    "verify_eta_par": ("corpus.def", ["verify", "EtaPar"]),
    "verify_rev": ("corpus.def", ["verify", "Rev"]),
    "dim_pair": ("corpus.def", ["dim", "Pair"]),
}
