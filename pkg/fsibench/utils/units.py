"""
The solver works in a single consistent unit system: lengths in cm, time in s, mass in
kg. Stresses and pressures are therefore stored in kg/(cm s^2), while inputs (the
material table, the reference pressure) are given in kPa.

Measurement type | SI unit | Input unit | Internal unit
-----------------+---------+------------+---------------
Pressure         | Pa      | kPa        | kg/(cm s^2)
Length           | m       | cm         | cm
"""

prefix_exponents: dict[str, int] = {
    "G": 9,
    "M": 6,
    "k": 3,
    "c": -2,
    "m": -3,
    "u": -6,
}

# 1 Pa = 1 kg/(m s^2) = 1e-2 kg/(cm s^2)
PASCAL_TO_INTERNAL: float = 1.0e-2


def split_unit(given_unit: str, si_unit: str) -> int:
    """Return the prefix exponent of a unit such as ``kPa`` for the SI unit ``Pa``.

    :param given_unit: unit with optional one-character SI prefix
    :param si_unit: expected SI unit
    :return: the decimal exponent of the prefix
    """

    if not given_unit.endswith(si_unit):
        raise ValueError(f"Unit {given_unit!r} is not a multiple of {si_unit!r}")
    prefix: str = given_unit[: -len(si_unit)]
    if not prefix:
        return 0
    if len(prefix) > 1 or prefix not in prefix_exponents:
        raise ValueError(f"Unknown prefix {prefix!r} in unit {given_unit!r}")
    return prefix_exponents[prefix]


def to_internal_stress(given_value: float, given_unit: str = "kPa") -> float:
    """Convert a pressure or elastic modulus to kg/(cm s^2).

    :param given_value: value to convert
    :param given_unit: unit of the value (for example ``kPa``)
    :return: value in the internal stress unit
    """

    exponent: int = split_unit(given_unit, "Pa")
    return float(given_value) * 10.0**exponent * PASCAL_TO_INTERNAL


def from_internal_stress(internal_value: float, target_unit: str = "kPa") -> float:
    """Convert an internal stress back to a pressure unit such as kPa."""

    exponent: int = split_unit(target_unit, "Pa")
    return float(internal_value) / (10.0**exponent * PASCAL_TO_INTERNAL)
