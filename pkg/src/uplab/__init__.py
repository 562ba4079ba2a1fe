"""uplab: a desk-scale numerical laboratory for classical harmonic analysis.

The package implements constructive machinery around the uncertainty
principle: summability kernels and Wiener inversion on the circle, Riesz
products on lacunary spectra, Hardy-space factorization, Szego/Kolmogorov
extremal problems, localization operators for uniqueness pairs, logarithmic
integral criteria on the line, the Ivashev-Musatov iteration, and
Beurling-Malliavin multiplier constructions.  Constructions return
numerically audited certificates rather than trusting their own bookkeeping.

Submodules (import directly, e.g. ``from uplab import circle_core``):
circle_core, measures_sets, riesz_lacunary, hardy_tools, szego_opuc,
uniqueness_pairs, line_logint, im_construct, bm_multiplier, cli.

All library operations are pure functions of immutable inputs and safe to
call concurrently.
"""

__version__ = "0.1.0"
