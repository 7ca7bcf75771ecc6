"""scikit-learn style front end over the functional modules."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .auxpoly import AuxCache
from .chebyshev import evaluate_all
from .intervals import BranchConfig, validate_config
from .mapping import build_mapping, detect_period, equilibrium_charges
from .recurrence import stieltjes_table
from .zeros import roots_of_Pn, roots_of_Qn


class GeneralizedChebyshev(TransformerMixin, BaseEstimator):
    """Monic orthogonal polynomials on ``[-1, 1]`` with the gaps removed.

    ``fit`` builds the recurrence table for the configured gaps; ``transform``
    maps a column of abscissae to the feature matrix ``[P_0(x), ..., P_{d-1}(x)]``.

    Parameters
    ----------
    alphas, betas : sequence of float
        Left and right gap endpoints, interleaved inside ``(-1, 1)``.
        Empty sequences give the classical interval.
    n_terms : int, default 8
        Number of polynomials ``d`` in the feature map.
    horizon : int, optional
        Table length. Defaults to ``max(24, n_terms + g + 2)``.
    normalize : bool, default False
        Divide ``P_n`` by ``sqrt(h_n)`` so the features are orthonormal.
    detect : bool, default True
        Compute the band charges and, when the coefficients are periodic,
        the mapping polynomial.

    Attributes
    ----------
    config_ : BranchConfig
    table_ : RecurrenceTable
    a_, b_, h_ : ndarray
        ``a_1..a_N``, ``b_1..b_N`` and ``h_0..h_N``.
    charges_ : ChargeVector or None
    period_ : int or None
    mapping_ : MappingData or None
    n_features_in_ : int
        Always 1.

    Examples
    --------
    >>> est = GeneralizedChebyshev(alphas=[-0.6], betas=[0.6], n_terms=4).fit()
    >>> est.period_
    2
    >>> est.transform([[0.0]]).shape
    (1, 4)
    """

    def __init__(self, alphas=(), betas=(), n_terms=8, horizon=None, normalize=False, detect=True):
        self.alphas = alphas
        self.betas = betas
        self.n_terms = n_terms
        self.horizon = horizon
        self.normalize = normalize
        self.detect = detect

    def fit(self, X=None, y=None):
        if int(self.n_terms) < 1:
            raise ValueError("n_terms must be positive")
        cfg = validate_config(BranchConfig(tuple(self.alphas), tuple(self.betas)))
        N = self.horizon or max(24, int(self.n_terms) + cfg.g + 2)
        table = stieltjes_table(cfg, N)
        self.config_ = cfg
        self.table_ = table
        self.a_ = np.asarray(table.a[1:])
        self.b_ = np.asarray(table.b[1:])
        self.h_ = np.asarray(table.h)
        self.charges_ = None
        self.period_ = None
        self.mapping_ = None
        if self.detect:
            self.charges_ = equilibrium_charges(cfg)
            self.period_ = detect_period(self.charges_)
            if self.period_ is not None and self.period_ <= N:
                self.mapping_ = build_mapping(cfg, table, self.period_)
        self.n_features_in_ = 1
        return self

    def _column(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return X
        if X.ndim != 2 or X.shape[1] != 1:
            raise ValueError(f"expected a single column, got shape {X.shape}")
        return X[:, 0]

    def transform(self, X):
        check_is_fitted(self, "table_")
        x = self._column(X)
        d = int(self.n_terms)
        P, _ = evaluate_all(self.table_, d - 1, x)
        F = P.T
        if self.normalize:
            F = F / np.sqrt(self.h_[:d])
        return F

    def second_kind(self, X):
        """``[Q_0(x), ..., Q_{d-1}(x)]`` for the same column of abscissae."""
        check_is_fitted(self, "table_")
        x = self._column(X)
        d = int(self.n_terms)
        _, Q = evaluate_all(self.table_, d - 1, x)
        return Q.T

    def roots(self, n: int, kind: str = "P") -> np.ndarray:
        """Real zeros of ``P_n`` (``kind='P'``) or ``Q_n`` (``kind='Q'``)."""
        check_is_fitted(self, "table_")
        if kind == "P":
            return roots_of_Pn(self.table_, n)
        if kind == "Q":
            return roots_of_Qn(self.table_, n)
        raise ValueError("kind must be 'P' or 'Q'")

    def aux(self):
        """Memoised auxiliary polynomial pairs for the fitted table."""
        check_is_fitted(self, "table_")
        return AuxCache(self.config_, self.table_)

    def get_feature_names_out(self, input_features=None):
        return np.array([f"P_{k}" for k in range(int(self.n_terms))], dtype=object)
