from pathlib import Path

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"

RANDOM_SEEDS = [7, 11, 2024]

# (file, p, q, chi)
CHI_CASES = [
    ("mu2_x2.json", "P", "P", 1),
    ("mu2_x2.json", "P", "P_twisted", -1),
    ("trivial_x2.json", "P", "P", 0),
    ("mu3_x3.json", "P", "P", 1),
    ("mu3_x3.json", "P", "P1", 0),
]
