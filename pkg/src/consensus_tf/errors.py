"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so that callers (and
the CLI) can map failures to exit statuses without string matching.
"""


class ConsensusTFError(Exception):
    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class GraphError(ConsensusTFError, ValueError):
    """Invalid graph input. ``code`` is one of ``non_positive_weight``,
    ``index_out_of_range``, ``duplicate_arc``, ``self_arc``, ``bad_node_count``
    or ``bad_vertex_set``."""

    code = "graph"


class EnumerationCapError(ConsensusTFError):
    code = "enumeration_cap"


class PathCountError(ConsensusTFError):
    code = "path_count_exceeds_cap"


class PathNotUniqueError(ConsensusTFError):
    code = "path_not_unique"


class NoPathError(ConsensusTFError):
    code = "no_path"


class PolynomialError(ConsensusTFError, ValueError):
    code = "polynomial"


class PairingError(ConsensusTFError):
    code = "non_conjugate_complex_gains"


class MultipleZeroEigenvalueError(ConsensusTFError):
    code = "multiple_zero_eigenvalues"


class IntegratorError(ConsensusTFError):
    code = "no_integrator_in_open_loop"


class SingularPointError(ConsensusTFError):
    code = "singular_at_sample_point"


class SamplingError(ConsensusTFError):
    code = "all_samples_rejected"


class ModelError(ConsensusTFError, ValueError):
    code = "model"
