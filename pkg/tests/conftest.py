from pathlib import Path

import pytest

from gaplab import zeros

DATA = Path(__file__).parent / "data"
ZEROS_100K = DATA / "zeros100k.txt.gz"


@pytest.fixture(scope="session")
def zero_table():
    if not ZEROS_100K.exists():
        pytest.skip("zero table not generated (see tools/make_zero_table.py)")
    return zeros.load_zeros_file(ZEROS_100K)


@pytest.fixture(scope="session")
def zeros_path():
    return ZEROS_100K
