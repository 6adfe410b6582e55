"""The fixed command suite whose reports are kept as golden files."""

SUITE: list[tuple[str, list[str]]] = [
    ("ap_37a", ["ap", "37a-short", "--max-prime", "100"]),
    ("witness_37a", ["witness", "37a-short", "--count", "5"]),
    ("witness_27a", ["witness", "27a-short", "--count", "5"]),
    ("classfield_tower", ["classfield", "--fund-disc", "-7", "--conductor", "1", "--prime", "3", "--nmax", "3"]),
    ("classfield_inert", ["classfield", "--fund-disc", "-7", "--inert-step", "5", "5"]),
    ("heegner_trace", ["heegner", "37a-short", "--fund-disc", "-7"]),
    ("heegner_inert", ["heegner", "37a-short", "--fund-disc", "-7", "--verify-inert", "3"]),
    ("heegner_tower", ["heegner", "37a-short", "--fund-disc", "-7", "--verify-tower", "3"]),
    ("primesearch_5", ["primesearch", "37a-short", "--fund-disc", "-7", "--p", "5"]),
    ("primesearch_7", ["primesearch", "37a-short", "--fund-disc", "-7", "--p", "7"]),
    ("primesearch_13", ["primesearch", "37a-short", "--fund-disc", "-7", "--p", "13"]),
    ("recurrence", ["recurrence", "--p", "5", "--ap", "-2", "--c0", "1", "--c1", "0", "--steps", "12"]),
]
