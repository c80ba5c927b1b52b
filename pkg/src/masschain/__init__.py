"""Disturbance amplification in chains of identical masses with passive interconnection."""

from .chain_core import (ChainConfig, DSequence, build_H, d_poly, d_seq,
                         intermass_tf_direct, p_identity, solve_chain_direct)
from .devices import (DEVICE_1, DEVICE_2, DEVICE_3, TABLE_DEVICES, TABLE_MASS,
                      DeviceSpec, admittance, g_of_s, h_of_s,
                      is_positive_real_on_axis, taylor_constants)
from .mobius import (F_closed, F_recursive, MapClass, classify_map, mu_plus,
                     sup_F_over_N, zeta)

__version__ = "0.1.0"
