"""Finite-group models of ``G wr_n Z``, the map ``xi`` and direct-product splitting."""
from .finite import (FiniteGroup, GroupAxiomError, alternating, corpus, cyclic, dicyclic,
                     dihedral, direct_product, find_isomorphism, from_generators, isomorphic,
                     semidirect_cyclic, symmetric)
from .splitting import (NotASubgroup, SplitReport, abstractly_split, check_direct_product,
                        product_map_is_isomorphism, split_report, subgroup_families, subgroups)
from .wreath import (AlgebraMismatch, HypothesesFail, LemmaReport, Quotient, WreathAlgebra,
                     WreathElement, Xi, find_failing_witness, permutation_ambient,
                     phi_projection, quotient_group, verify_lemma_hypotheses, wreath_mul, xi_map)

__all__ = [name for name in dir() if not name.startswith("_")]
