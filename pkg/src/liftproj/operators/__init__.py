from .certificates import (LAS_CONDITIONS, SA_CONDITIONS, CertificateReport, ConditionResult,
                           LasCertificate, SaPlusCertificate, check_las, check_sa_plus, cut_localizers)
from .builders import (build_las_chipped, build_las_cropped, build_sa_plus_prop3, build_sa_plus_thm13,
                       dump_certificate, load_certificate, zeros_factorization, linear_mobius, transport_las)
from .tilde_ls import (tilde_ls_closed_form, tilde_ls_max_bisect, tilde_ls_max_lp, tilde_ls_max_symmetric,
                       tilde_ls_membership_lp)
from .obstructions import (Obstruction, UnsupportedDescriptionError, brute_force_obstructions,
                           enumerate_obstructions, refined_polytope)
from .ranks import (bz_lower, tilde_ls_witness, witness_depth_bound, witness_interval, diagonal_witness, sa_plus_rank_cropped,
                    sa_plus_iterate_cropped, sa_plus_rank_lower, sa_plus_rank_upper, sa_plus_sufficient,
                    support_fractional, tilde_ls_rank, xij)
