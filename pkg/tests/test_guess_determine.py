import pytest

from app.models.errors import DomainTooLargeError, NoConsistentStateError, ParameterError
from app.models.mini import MiniParams
from app.services.analysis.guess_determine import gd_attack_mini
from app.services.mini_snow import find_primitive_params, mini_enumerate, mini_keystream


@pytest.fixture(scope="module")
def small_params():
    return find_primitive_params(3, 3)


def planted_state(rng, params):
    return tuple(rng.randrange(1 << params.m) for _ in range(params.state_words))


def test_recovers_a_consistent_state(rng, small_params):
    planted = planted_state(rng, small_params)
    keystream = mini_keystream(small_params, planted, 12)
    result = gd_attack_mini(small_params, keystream)
    assert mini_keystream(small_params, result.state, 12) == keystream
    assert result.guesses <= 1 << (2 * small_params.m)
    assert result.candidates == [result.state]


def test_exhaustive_mode_matches_enumeration(rng, small_params):
    for _ in range(3):
        keystream = mini_keystream(small_params, planted_state(rng, small_params), 6)
        result = gd_attack_mini(small_params, keystream, exhaustive=True)
        assert result.guesses == 1 << (2 * small_params.m)
        assert set(result.candidates) == set(mini_enumerate(small_params, keystream))


def test_xor_arithmetic(rng, small_params):
    params = small_params.with_changes(arith="xor")
    planted = planted_state(rng, params)
    keystream = mini_keystream(params, planted, 8)
    result = gd_attack_mini(params, keystream, exhaustive=True)
    assert planted in result.candidates


def test_corrupted_keystream_has_no_solution(rng, small_params):
    keystream = mini_keystream(small_params, planted_state(rng, small_params), 24)
    corrupted = None
    # flip words until the prefix falls outside the keystream set
    for position in range(8, 24):
        trial = list(keystream)
        trial[position] ^= 1
        if not mini_enumerate(small_params, trial):
            corrupted = trial
            break
    assert corrupted is not None
    with pytest.raises(NoConsistentStateError):
        gd_attack_mini(small_params, corrupted)


def test_argument_checks(small_params):
    with pytest.raises(ParameterError):
        gd_attack_mini(small_params, [1, 2])
    with pytest.raises(ParameterError):
        gd_attack_mini(small_params, [1, 2, 8])
    with pytest.raises(DomainTooLargeError):
        gd_attack_mini(MiniParams(8, 4, [(0, 1)]), [0] * 8)


def test_result_dict(rng, small_params):
    keystream = mini_keystream(small_params, planted_state(rng, small_params), 10)
    data = gd_attack_mini(small_params, keystream).to_dict()
    assert set(data) == {"state", "guesses", "branches", "candidates"}
    assert len(data["state"]) == small_params.state_words


@pytest.mark.slow
def test_default_instance(rng, mini_params):
    planted = planted_state(rng, mini_params)
    keystream = mini_keystream(mini_params, planted, 12)
    result = gd_attack_mini(mini_params, keystream, exhaustive=True)
    assert result.candidates == [planted]
    assert result.unique
    assert result.guesses <= 2 ** 8
    assert set(result.candidates) == set(mini_enumerate(mini_params, keystream))

    first = gd_attack_mini(mini_params, keystream)
    assert first.state == planted
    assert first.guesses <= 2 ** 8
