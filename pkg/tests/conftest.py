import random
from pathlib import Path

import pytest

from summarank.embedding import LocalProvider

FIXTURES = Path(__file__).parent / "fixtures"

# Small Bengali word pool for generated fixture texts.
BENGALI_WORDS = (
    "ঢাকা নদী বৃষ্টি শহর গ্রাম মানুষ দল খেলা জয় বাজার দাম কাপড় বই মেলা "
    "শিক্ষা বিদ্যালয় স্বাস্থ্য হাসপাতাল সেবা সরকার ঘোষণা সংখ্যা ইন্টারনেট "
    "সেতু যাতায়াত কৃষক ধান ফলন বাঘ বন জরিপ পানি আশ্রয় ত্রাণ রান ওভার"
).split()


@pytest.fixture
def docs_path() -> Path:
    return FIXTURES / "docs.jsonl"


@pytest.fixture
def candidates_path() -> Path:
    return FIXTURES / "candidates.jsonl"


@pytest.fixture
def local_provider() -> LocalProvider:
    return LocalProvider(dim=64)


def random_bengali_text(rng: random.Random, min_words: int = 3, max_words: int = 12) -> str:
    count = rng.randint(min_words, max_words)
    return " ".join(rng.choice(BENGALI_WORDS) for _ in range(count))
