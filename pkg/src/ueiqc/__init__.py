"""Simulation toolkit for quantum communication secured by uncorrectable errors.

Pauli algebra, stabilizer codes, statevector and Pauli-frame backends, the
sender/relay/receiver protocol, an intercept-and-resend adversary, and the
analytic estimates that go with them.
"""
from .pauli import Pauli, commutes, from_label, multiply, syndrome_of, to_label
from .codes import (
    CodeSpec, build_decoder_table, census_uncorrectable, classify_error,
    get_code, load_catalog, sample_uncorrectable, validate_code,
)
from .keys import KeyMaterial, dummy_spec, keygen, permute, inverse_permute, select_code
from .statevector import StateVector, decode, encode, fidelity
from .frames import ChannelModel, frame_trial, frame_trials
from .protocol import SessionConfig, TrialReport, load_config, run_session
from .adversary import AttackReport, InterceptResend, NoAttack, run_attack_campaign
from .analysis import (
    acc_info_bound, eavesdropper_state, holevo_bound, logical_error_rate,
    nu_bound, nu_crossover, nu_estimate, p_L_bound, teleport_overhead,
)

__version__ = "0.1.0"
