"""gapsieve: B-free short-interval sieves, Hecke/Kloosterman nonvanishing
scans, exact exponent tables, and reproducible exponential-sum benchmarks."""

from .arith import Factorization, ec_trace, factorize, is_prime, primes_in
from .bfree import (BSet, explicit_bset, gap_scan, generated_bset,
                    hecke_nonvanishing_interval, sieve_interval,
                    squarefree_bset, support_count_cor7)
from .exponents import (ExponentPair, RhoHypothesis, ab_process,
                        admissibility, historical_table,
                        minimal_theta_from_constraints, optimize_theta,
                        theta_cor10, theta_profile)
from .expsum import (SumSpec, bound_eval, quadruple_count, type1_triple_sum,
                     type2_sum)
from .hecke import (HeckeForm, coeff, delta_form, elliptic_form,
                    integer_form_criterion, moment_sum, table_form, tau,
                    vanishing_scan)
from .kloosterman import kloosterman_sum, lambda_S, verify_prop4
from .sieveweights import (buchstab_w, choose_parameters, decomposition_A,
                           fundamental_lemma_weights, remainder_r,
                           sandwich_values)

__version__ = "0.1.0"
