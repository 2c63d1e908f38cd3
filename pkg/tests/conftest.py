import random

import pytest

from entropyrate.corpus import Document, build_vocabulary


def make_random_docs(n_docs, alphabet, min_len=3, max_len=30, seed=0, prefix="doc"):
    rng = random.Random(seed)
    docs = []
    for i in range(n_docs):
        body = tuple(rng.choice(alphabet) for _ in range(rng.randint(min_len, max_len)))
        docs.append(Document(id=f"{prefix}{i:04d}", body=body))
    return docs


@pytest.fixture(scope="session")
def random_docs():
    return make_random_docs(50, ["a", "b", "c", "d", "e"], seed=13)


@pytest.fixture(scope="session")
def random_vocab(random_docs):
    return build_vocabulary(random_docs, min_count=1)
