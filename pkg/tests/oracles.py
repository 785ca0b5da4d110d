"""Reference implementations that share no code with the package."""
from fractions import Fraction


def v_p(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def rational_split(x: Fraction, p: int):
    """x = p^k * u with u a p-adic unit given mod p^8."""
    num, den = x.numerator, x.denominator
    k = v_p(abs(num), p) - v_p(den, p)
    num //= p ** v_p(abs(num), p)
    den //= p ** v_p(den, p)
    mod = p**8
    return k, num * pow(den, -1, mod) % mod


def is_square_q2(x: Fraction) -> bool:
    k, u = rational_split(x, 2)
    return k % 2 == 0 and u % 8 == 1


def is_square_qp(x: Fraction, p: int) -> bool:
    k, u = rational_split(x, p)
    return k % 2 == 0 and pow(u % p, (p - 1) // 2, p) == 1


def is_cube_q3(x: Fraction) -> bool:
    # units of Z_3: u is a cube iff u = +-1 mod 9
    k, u = rational_split(x, 3)
    return k % 3 == 0 and u % 9 in (1, 8)


def tags_p_divisible(tag: str, p: int) -> bool:
    """Is the rank-one component p-divisible?  Decided by 1/p membership."""
    if tag == "Z":
        return False
    if tag == "Q":
        return True
    inv = [int(q) for q in tag[len("Z[1/"):-1].split("*")]
    return any(q % p == 0 for q in inv)


def has_p_divisible_nontrivial_convex(tags, p) -> bool:
    # nontrivial convex subgroups of a lexicographic product are the proper suffixes' complements
    n = len(tags)
    for k in range(n):
        suffix = tags[k:]
        if all(tags_p_divisible(t, p) for t in suffix):
            return True
    return False


def finite_field_power_map(q: int, p: int):
    """Predicate for membership in (F_q^x)^p by the exponent criterion."""
    from math import gcd

    g = gcd(p, q - 1)
    e = (q - 1) // g
    return lambda x: x.is_zero() or (x ** e) == x.field.one
