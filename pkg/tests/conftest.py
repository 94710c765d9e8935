import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trickcheck import builtin_shousuigongcishi

TRICKS_DIR = Path(__file__).parent.parent / "tricks"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def builtin():
    return builtin_shousuigongcishi()


@pytest.fixture(scope="session")
def shipped_script_path():
    return TRICKS_DIR / "shousuigongcishi.trick"
