import sys
from pathlib import Path

# make the sibling reference helpers importable regardless of rootdir
sys.path.insert(0, str(Path(__file__).parent))
