from abc import ABC, abstractmethod
from typing import Tuple, Union

from numpy.typing import ArrayLike, NDArray


class BaseMeasureInterface(ABC):
    """
    Abstract interface for a finite base measure on the real line.
    """

    @property
    @abstractmethod
    def mass(self) -> float:
        """Total mass B0(R)."""
        pass

    @property
    @abstractmethod
    def is_continuous(self) -> bool:
        """True when the measure has no atoms."""
        pass

    @abstractmethod
    def cdf(self, x: ArrayLike) -> Union[float, NDArray]:
        """
        Mass of (-inf, x], elementwise.

        Args:
            x: Evaluation points; +/-inf are allowed.

        Returns:
            Values in [0, mass], nondecreasing and right-continuous in x.
        """
        pass

    @abstractmethod
    def quantile(self, u: ArrayLike) -> Union[float, NDArray]:
        """
        Generalized inverse of the normalised CDF, inf{x : cdf(x) >= u * mass}.

        Args:
            u: Probabilities in [0, 1].

        Returns:
            Points of the support.
        """
        pass

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """Smallest closed interval carrying all of the mass."""
        pass
