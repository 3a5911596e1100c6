import pytest
from hypothesis import given, strategies as st

from cgl.primes import is_prime, mobius_table, primes_up_to, require_prime, smallest_prime_factors


def trial_division_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def naive_mobius(n):
    mu, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            mu = -mu
        k += 1
    return -mu if n > 1 else mu


@given(st.integers(-10, 200000))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division_prime(n)


def test_large_primes_and_carmichael_numbers():
    assert is_prime(2**127 - 1)
    assert is_prime(999999937)
    assert not is_prime(561)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime((2**61 - 1) * (2**89 - 1))


def test_sieve_tables():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    mu = mobius_table(500)
    assert all(mu[n] == naive_mobius(n) for n in range(1, 501))
    spf = smallest_prime_factors(500)
    assert all(spf[n] == next(p for p in range(2, n + 1) if n % p == 0) for n in range(2, 501))


@pytest.mark.parametrize("n", [0, 1, 4, 91])
def test_require_prime_rejects(n):
    with pytest.raises(ValueError):
        require_prime(n)
