#!/usr/bin/env python3
"""Rebuild the bundled character-trigram language profiles.

Reads the training sentence files next to this script and writes the JSON
profiles into the package data directory. Run from the repository root:

    python scripts/build_language_profiles.py
"""
from __future__ import annotations

import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

from crossrefine.analysis.langid import LanguageProfile, save_profile  # noqa: E402

DATA_DIR = REPO_ROOT / "src" / "crossrefine" / "data" / "langid"


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for code in ("en", "de"):
        train_path = Path(__file__).parent / f"profile_train_{code}.txt"
        profile = LanguageProfile.from_text(code, train_path.read_text(encoding="utf-8"))
        out_path = DATA_DIR / f"profile_{code}.json"
        save_profile(profile, out_path)
        print(f"{out_path}: {len(profile.counts)} trigrams")


if __name__ == "__main__":
    main()
