import numpy as np
import pytest

from ferrosim import (DielectricLayer, FerroMaterial, StackConfig,
                      calibrate_landau)

# shared hafnia-like demo material: P_r = 25 uC/cm2, E_C = 1 MV/cm
P_R = 0.25
E_C = 1e8


@pytest.fixture(scope="session")
def hzo():
    alpha, beta = calibrate_landau(P_R, E_C)
    return FerroMaterial(alpha=alpha, beta=beta, gamma=0.0, k=1e-9,
                         rho=1.0, eps_f=30.0, t_f=10e-9)


@pytest.fixture(scope="session")
def mfm_stack(hzo):
    return StackConfig(ferro=hzo, area=1e-10)


@pytest.fixture(scope="session")
def mfdm_stack(hzo):
    return StackConfig(ferro=hzo, area=1e-10,
                       dielectric=DielectricLayer(eps_d=4.0, t_d=1e-9))


@pytest.fixture()
def rng():
    return np.random.default_rng(20230917)
