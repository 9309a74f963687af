"""minset: minimal sets (subsequence-order antichains) of arithmetic sets."""

from .numerals import (Antichain, DomainError, Numeral, antichain_from_values,
                       incomparable, is_subsequence, parse_numeral,
                       reduce_to_antichain, to_numeral)
from .arith import (FactorPolicy, Factorization, factorize, is_prime,
                    phi_eval, psi_eval)
from .oracles import (Membership, OracleSpec, is_psi_value, is_totient,
                      parse_oracle_spec, qr_residues)
from .engine import (MinimalSetReport, minimal_set_automatic,
                     minimal_set_bounded, set_algebra_experiment,
                     verify_completeness)

__version__ = "0.1.0"
