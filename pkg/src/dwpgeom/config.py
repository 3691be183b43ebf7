from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class Tolerances:
    frame: float = 1e-12  # Gram matrix of a frame vs identity
    spd_pivot: float = 1e-12  # smallest admissible Cholesky pivot
    plane: float = 1e-12  # smallest admissible Gram determinant of a 2-plane
    warping: float = 1e-12  # smallest admissible warping function value
    engine: float = 1e-9  # identities that hold exactly for exact-jet inputs
    axioms: float = 1e-10  # almost contact axioms
    unit: float = 1e-9  # unit-length checks
    equality: float = 1e-8  # equality diagnostics and slack sign
    chen: float = 1e-9
    chen_gap_floor: float = -1e-12
    verdict: float = 1e-12  # E == 0 band for obstruction verdicts
    fd_step: float = 1e-4
    fd_rel: float = 1e-5

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
