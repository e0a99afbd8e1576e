import pytest

from pathlib import Path

import daa

DATA_DIR = Path(__file__).parent / "data"

# Canonical random-data curve at the 40-byte grid, used across tests.
RANDOM_ROW = ((8, 2.976), (16, 3.941), (24, 4.496), (32, 4.878), (40, 5.171))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def ref1000() -> daa.ReferenceCurve:
    """Full-size reference shared by the slower integration tests."""
    return daa.build_reference(seed=7, sample_count=1000)


@pytest.fixture(scope="session")
def ref_small() -> daa.ReferenceCurve:
    return daa.build_reference(seed=3, sample_count=40, max_len=64)


@pytest.fixture(scope="session")
def ref1000_csv(tmp_path_factory, ref1000) -> Path:
    path = tmp_path_factory.mktemp("ref") / "reference.csv"
    daa.save_reference(ref1000, path)
    return path
