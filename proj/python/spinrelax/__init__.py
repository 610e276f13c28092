"""Electron-spin relaxation models: rates, motional regimes, and fits."""

from ._core import (
    DomainError,
    InputError,
    avogadro,
    classify_regime,
    convert_energy,
    correlation_time,
    crossover_diffusion,
    diffusion_rates,
    fit_echo,
    fit_orbach,
    gamma_electron,
    hbar,
    k_boltzmann,
    kappa,
    mixture_concentration,
    orbach_rates,
    proton_concentration_toluene,
    scaling_exponent,
    species,
    species_labels,
    spectral_density,
    stokes_einstein,
    toluene_self_diffusion,
    zeeman_frequencies,
)

__all__ = [
    "DomainError",
    "InputError",
    "avogadro",
    "classify_regime",
    "convert_energy",
    "correlation_time",
    "crossover_diffusion",
    "diffusion_rates",
    "fit_echo",
    "fit_orbach",
    "gamma_electron",
    "hbar",
    "k_boltzmann",
    "kappa",
    "mixture_concentration",
    "orbach_rates",
    "proton_concentration_toluene",
    "scaling_exponent",
    "species",
    "species_labels",
    "spectral_density",
    "stokes_einstein",
    "toluene_self_diffusion",
    "zeeman_frequencies",
]
