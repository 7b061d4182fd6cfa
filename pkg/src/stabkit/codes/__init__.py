from .stabilizer import StabilizerCode, find_logical_operators, normalizer_coset_count
from .classical import ClassicalLinearCode, hamming_7_4
from .css import css_construct
from .dense import codeword_basis, verify_knill_laflamme, KLReport
from .bounds import hamming_bound, gv_bound, singleton_bound, asymptotic_rate_bounds, bounds_table
from .fileformat import parse_code, format_code, parse_matrix, format_matrix
from .registry import get_code, five_qubit, seven_qubit, nine_qubit


def validate(code):
    return code.validate()


def syndrome(code, e):
    return code.syndrome(e)


def error_for_syndrome(code, v):
    return code.error_for_syndrome(v)


def distance(code):
    return code.distance()


def logical_operators(code):
    return list(code.logical_x), list(code.logical_z)
