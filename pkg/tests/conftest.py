import itertools

import pytest

from goldenmonoid.ztau import EPWord


def all_words(max_len, alphabet="LR", min_len=0):
    for n in range(min_len, max_len + 1):
        for tup in itertools.product(alphabet, repeat=n):
            yield "".join(tup)


def ep_words(max_total):
    """All canonical eventually periodic binary words with
    len(prefix) + len(period) <= max_total."""
    seen = {}
    for total in range(1, max_total + 1):
        for plen in range(1, total + 1):
            for pre in itertools.product("01", repeat=total - plen):
                for per in itertools.product("01", repeat=plen):
                    w = EPWord("".join(pre), "".join(per)).canonical()
                    seen.setdefault(str(w), w)
    return list(seen.values())


@pytest.fixture(scope="session")
def ep_words_5():
    return ep_words(5)


@pytest.fixture(scope="session")
def ep_words_8():
    return ep_words(8)
