"""Cross-situational word-referent learning: learners, corpora, evaluation.

The public surface:

* :class:`~xsl_lab.estimator.CrossSituationalLearner` - the incremental
  learner, as a scikit-learn style estimator (six configurations via the
  ``alignment`` and ``representation`` parameters).
* :class:`~xsl_lab.batch_em.BatchAlignmentModel` - the multi-pass batch
  reference model.
* :mod:`~xsl_lab.corpus`, :mod:`~xsl_lab.generator`, :mod:`~xsl_lab.trials`
  - corpus I/O, transforms, synthesis, and probe-trial construction.
* :mod:`~xsl_lab.evaluation` - comprehension scoring and reports.
* :mod:`~xsl_lab.experiments` - the scripted experiment battery behind the
  ``xsl-lab`` command line.
"""

from .batch_em import BatchAlignmentModel
from .estimator import CrossSituationalLearner
from .learner import MODEL_ORDER, LearnerConfig
from .types import Corpus, CorpusSpec, GoldLexicon, InputPair

__version__ = "0.1.0"

__all__ = [
    "BatchAlignmentModel",
    "Corpus",
    "CorpusSpec",
    "CrossSituationalLearner",
    "GoldLexicon",
    "InputPair",
    "LearnerConfig",
    "MODEL_ORDER",
    "__version__",
]
