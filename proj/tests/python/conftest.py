import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]

if "RVG_PYTHON_PATH" in os.environ:
    sys.path.insert(0, os.environ["RVG_PYTHON_PATH"])
else:
    try:
        import rvg  # noqa: F401
    except ImportError:
        sys.path.insert(0, str(ROOT / "build" / "python"))
