"""Random walks on two-generator semigroups with run-absorption relations:
simulation, closed-form bound evaluation, and rooted-digraph spread analysis.
"""

from .sequences import (InvalidParameter, MSequence, SequenceCapExceeded,
                        make_beta_sequence, make_explicit_sequence,
                        make_identity_sequence, make_slow_sequence,
                        parse_sequence, speed_profile)
from .rewriting import (ReducedWord, RewriteSystem, check_confluence_sample,
                        random_word)
from .seeding import mix64
from .walk import (SpeedCurve, WalkConfig, estimate_block_stats,
                   estimate_exponent, estimate_speed, simulate_walk)
from .bounds import (HypothesisViolated, profile_envelope, profile_peak_table,
                     sandwich_bounds, weak_bounds)
from .digraph import (Digraph, EPresentation, FiniteTrapDetected,
                      TruncationUnsound, ball_spread, ball_spread_at,
                      cayley_ball, check_spread_inequalities, crossing_counts,
                      directed_path, finite_sccs, has_trap, load_edge_list,
                      out_tree, parse_edge_list, verify_spread_growth,
                      walk_distance_samples, walk_distances)
from .subwords import (SubwordStrategy, constant_strategy, decode_word,
                       encode_word, exact_hit_probability,
                       last_letter_strategy, mc_hit_probability,
                       pseudorandom_strategy, subword_bound)
from .experiments import (DEFAULT_MASTER_SEED, RECIPES, RecipeReport,
                          run_recipe)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MASTER_SEED",
    "Digraph",
    "EPresentation",
    "FiniteTrapDetected",
    "HypothesisViolated",
    "InvalidParameter",
    "MSequence",
    "RECIPES",
    "RecipeReport",
    "ReducedWord",
    "RewriteSystem",
    "SequenceCapExceeded",
    "SpeedCurve",
    "SubwordStrategy",
    "TruncationUnsound",
    "WalkConfig",
    "ball_spread",
    "ball_spread_at",
    "cayley_ball",
    "check_confluence_sample",
    "check_spread_inequalities",
    "constant_strategy",
    "crossing_counts",
    "decode_word",
    "directed_path",
    "encode_word",
    "estimate_block_stats",
    "estimate_exponent",
    "estimate_speed",
    "exact_hit_probability",
    "finite_sccs",
    "has_trap",
    "last_letter_strategy",
    "load_edge_list",
    "make_beta_sequence",
    "make_explicit_sequence",
    "make_identity_sequence",
    "make_slow_sequence",
    "mc_hit_probability",
    "mix64",
    "out_tree",
    "parse_edge_list",
    "parse_sequence",
    "profile_envelope",
    "profile_peak_table",
    "pseudorandom_strategy",
    "random_word",
    "run_recipe",
    "sandwich_bounds",
    "simulate_walk",
    "speed_profile",
    "subword_bound",
    "verify_spread_growth",
    "walk_distance_samples",
    "walk_distances",
    "weak_bounds",
]
