import numpy as np
import pytest

from app.config import enable_analysis_hooks
from app.models.errors import FaultError, HookUnavailableError, RankDeficientError
from app.models.fault import FaultSpec
from app.models.keys import Snow3gKey
from app.models.state import Snow3gState
from app.services.analysis.fault import (STATE_BITS, FaultHook, build_fault_system, clean_run,
                                         default_fault_schedule, fault_response, faulty_run, inject_fault,
                                         random_planted_state, recover_state_linearized, run_fault_experiment,
                                         single_bit_schedule)
from app.services.analysis.f2 import bits_from_int, rank
from app.services.keystream import CipherVariant
from app.services.snow3g import Snow3g


def planted_bits(state: Snow3gState) -> np.ndarray:
    return np.concatenate([bits_from_int(w, 32) for w in state.lfsr])


def test_hook_requires_opt_in():
    enable_analysis_hooks(False)
    cipher = Snow3g(Snow3gKey.from_hex("0" * 32, "0" * 32))
    with pytest.raises(HookUnavailableError):
        FaultHook(cipher)


def test_hook_from_environment(monkeypatch):
    monkeypatch.setenv("SNOWLAB_ANALYSIS_HOOKS", "1")
    cipher = Snow3g(Snow3gKey.from_hex("0" * 32, "0" * 32))
    hook = FaultHook(cipher)
    hook.write("lfsr", 7, cell=3)
    assert cipher.lfsr[3] == 7
    assert hook.read("r1") == cipher.r1


def test_inject_fault_on_real_cipher(hooks_enabled):
    cipher = Snow3g(Snow3gKey.from_hex("1" * 32, "2" * 32))
    before = cipher.snapshot()
    after = inject_fault(before, FaultSpec("r1", before.clock, bit=3))
    assert after.r1 == before.r1 ^ 8
    assert after.lfsr == before.lfsr
    with pytest.raises(FaultError):
        inject_fault(before, FaultSpec("r1", before.clock + 1, bit=3))


def test_faulty_run_diverges_after_fault(hooks_enabled):
    planted = random_planted_state(seed=1)
    clean = clean_run(planted, 10)
    faulty = faulty_run(planted, FaultSpec("lfsr", 4, bit=0, cell=15), 10)
    assert faulty.words[:4] == clean.words[:4]
    assert faulty.words[4] != clean.words[4]
    with pytest.raises(FaultError):
        faulty_run(planted, FaultSpec("r2", 10), 10)


def test_default_schedule_recovers_state(hooks_enabled):
    planted, result = run_fault_experiment(seed=42)
    assert result.rank == STATE_BITS
    assert result.verified
    assert result.state.lfsr == planted.lfsr
    assert len(result.fault_ranks) == len(default_fault_schedule()) == 24


def test_equations_hold_for_planted_state(hooks_enabled):
    planted = random_planted_state(seed=9)
    faults = default_fault_schedule()[:5]
    clean = clean_run(planted, 12)
    system, _ = build_fault_system(clean, [faulty_run(planted, f, 12) for f in faults])
    x = planted_bits(planted).astype(np.int64)
    assert ((system.rows.astype(np.int64) @ x) % 2).tolist() == system.rhs.tolist()


def test_single_bit_faults_leave_system_underdetermined(hooks_enabled):
    faults = single_bit_schedule()
    with pytest.raises(RankDeficientError) as exc:
        run_fault_experiment(seed=42, faults=faults)
    assert exc.value.rank <= len(faults)
    assert exc.value.needed == STATE_BITS


def test_flip_faults_add_no_equations():
    rows, constant = fault_response("lfsr", 0, None, "flip", 0, 2)
    assert rank(rows) == 0
    assert constant.any()
    rows, _ = fault_response("lfsr", 0, None, "reset", 0, 2)
    assert rank(rows) == 32


def test_recovery_preconditions(hooks_enabled):
    planted = random_planted_state(seed=3)
    with pytest.raises(RankDeficientError):
        recover_state_linearized(clean_run(planted, 4), [])
    with pytest.raises(FaultError):
        real = clean_run(planted, 4, variant=CipherVariant.REAL)
        recover_state_linearized(real, [faulty_run(planted, default_fault_schedule()[0], 4)])
    busy = Snow3gState(planted.lfsr, r1=1)
    with pytest.raises(FaultError):
        recover_state_linearized(clean_run(busy, 4), [faulty_run(busy, default_fault_schedule()[0], 4)])


def test_schedules():
    schedule = default_fault_schedule(start=5)
    assert schedule[0].time == 5
    assert {f.kind for f in schedule} == {"reset"}
    assert [f.target for f in schedule[16:]] == ["r1"] * 4 + ["r2"] * 4
    assert all(f.bit is not None for f in single_bit_schedule(8))
    assert random_planted_state(7, 1) == random_planted_state(7, 1)
    assert random_planted_state(7, 1) != random_planted_state(7, 2)
