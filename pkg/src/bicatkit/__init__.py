"""bicatkit: a workbench for finite tabulated bicategories.

Validates bicategory and pseudofunctor axioms, normalizes elevator-style
2-cell expressions, manipulates cylinders and homotopies relative to a marked
arrow class, builds the homotopy bicategory with a sound equality decider, and
emits replayable localization certificates.
"""

__version__ = "0.1.0"
