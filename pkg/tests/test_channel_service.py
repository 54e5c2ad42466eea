import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis import settings as hyp_settings

from models.channel import MimoChannel
from models.matrix import SubsetIndex
from services.channel_service import ChannelService
from utils.errors import ChannelParseError, InvalidInputError

channel_service = ChannelService()


class TestChannelService:
    """Тесты для ChannelService"""

    @pytest.fixture
    def channel_service(self):
        """Фикстура для создания экземпляра ChannelService"""
        return ChannelService()

    @pytest.fixture
    def sample_channel(self):
        """Фикстура для создания тестового канала 2x3"""
        return MimoChannel(H=np.array([[1 + 1j, 0.5, -0.25j], [0.0, 2.0 - 1j, 1.0]]))

    def test_capacity_all_ones(self, channel_service):
        """Тест канала из единиц 3x3 при P=1: log2(1 + 9)"""
        channel = channel_service.gen_all_ones(3, 3)
        report = channel_service.capacity(channel, 1.0)

        assert math.isclose(report.capacity_bits, math.log2(10.0), rel_tol=1e-12)
        assert report.n_t == 3 and report.n_r == 3
        assert len(report.spectrum) == 3

    def test_capacity_parallel(self, channel_service):
        """Тест параллельного канала 4x4 при P=100: 4·log2(101)"""
        report = channel_service.capacity(channel_service.gen_parallel(4), 100.0)
        assert math.isclose(report.capacity_bits, 4 * math.log2(101.0), rel_tol=1e-12)

    def test_capacity_zero_channel(self, channel_service):
        """Тест нулевого канала: пропускная способность равна нулю"""
        channel = MimoChannel(H=np.zeros((2, 2)))
        assert channel_service.capacity(channel, 10.0).capacity_bits == 0.0

    def test_capacity_reciprocity(self, channel_service):
        """Тест взаимности: C(H) = C(H†)"""
        channel = channel_service.gen_gaussian(3, 5, seed=42)
        forward = channel_service.capacity(channel, 2.5).capacity_bits
        backward = channel_service.capacity(channel.reciprocal(), 2.5).capacity_bits

        assert math.isclose(forward, backward, rel_tol=1e-10)

    def test_capacity_grows_with_power(self, channel_service):
        """Тест монотонности по мощности"""
        channel = channel_service.gen_gaussian(3, 3, seed=5)
        values = [channel_service.capacity(channel, p).capacity_bits for p in (0.01, 1.0, 100.0)]
        assert values[0] < values[1] < values[2]

    def test_capacity_rejects_bad_power(self, channel_service, sample_channel):
        """Тест отклонения неположительной мощности"""
        with pytest.raises(InvalidInputError):
            channel_service.capacity(sample_channel, 0.0)

    def test_subchannel(self, channel_service, sample_channel):
        """Тест выделения подканала по строкам rx и столбцам tx"""
        sub = channel_service.subchannel(
            sample_channel, SubsetIndex.of(3, [1, 3]), SubsetIndex.of(2, [2]))

        assert sub.n_r == 1 and sub.n_t == 2
        assert np.array_equal(sub.H, [[0.0, 1.0]])

    def test_subchannel_universe_mismatch(self, channel_service, sample_channel):
        """Тест ошибки при неверном размере множества"""
        with pytest.raises(InvalidInputError):
            channel_service.subchannel(sample_channel, SubsetIndex.of(2, [1]), SubsetIndex.of(2, [1]))

    def test_gen_gaussian_is_deterministic(self, channel_service):
        """Тест воспроизводимости генератора при одинаковом зерне"""
        first = channel_service.gen_gaussian(4, 3, seed=123)
        second = channel_service.gen_gaussian(4, 3, seed=123)
        other = channel_service.gen_gaussian(4, 3, seed=124)

        assert first.H.shape == (3, 4)
        assert np.array_equal(first.H, second.H)
        assert not np.array_equal(first.H, other.H)

    def test_gen_gaussian_unit_variance(self, channel_service):
        """Тест средней мощности коэффициентов E|h|² = 1"""
        channel = channel_service.gen_gaussian(1000, 1000, seed=2024)
        mean_power = float(np.mean(np.abs(channel.H) ** 2))
        assert 0.99 <= mean_power <= 1.01

    def test_gen_rejects_bad_dims(self, channel_service):
        """Тест отклонения нулевых размеров"""
        with pytest.raises(InvalidInputError):
            channel_service.gen_all_ones(0, 3)

    def test_json_round_trip(self, channel_service, sample_channel, tmp_path):
        """Тест записи и чтения JSON-файла канала"""
        path = tmp_path / "channel.json"
        channel_service.save_channel(sample_channel, path, power_hint=1.0)

        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["n_r"] == 2 and document["n_t"] == 3
        assert document["power_hint"] == 1.0

        loaded = channel_service.load_channel(path)
        assert np.array_equal(loaded.H, sample_channel.H)

    def test_csv_round_trip(self, channel_service, sample_channel, tmp_path):
        """Тест записи и чтения CSV-файла канала"""
        path = tmp_path / "channel.csv"
        channel_service.save_channel(sample_channel, path)

        assert path.read_text(encoding="utf-8").splitlines()[0] == "2,3"
        loaded = channel_service.load_channel(path)
        assert np.array_equal(loaded.H, sample_channel.H)

    def test_csv_with_label_line(self, channel_service, tmp_path):
        """Тест CSV с поясняющей строкой заголовка"""
        path = tmp_path / "labeled.csv"
        path.write_text("n_r,n_t\n1,2\n1.0,0.0,0.0,-1.0\n", encoding="utf-8")

        loaded = channel_service.load_channel(path)
        assert np.array_equal(loaded.H, [[1.0, -1j]])

    def test_csv_row_length_error_has_location(self, channel_service, tmp_path):
        """Тест указания строки при ошибке разбора CSV"""
        path = tmp_path / "broken.csv"
        path.write_text("1,2\n1.0,0.0,2.0\n", encoding="utf-8")

        with pytest.raises(ChannelParseError) as exc_info:
            channel_service.load_channel(path)
        assert exc_info.value.location == "line 2"

    def test_csv_non_finite_value(self, channel_service, tmp_path):
        """Тест отклонения бесконечных значений в CSV"""
        path = tmp_path / "inf.csv"
        path.write_text("1,1\ninf,0.0\n", encoding="utf-8")

        with pytest.raises(ChannelParseError):
            channel_service.load_channel(path)

    def test_json_size_mismatch(self, channel_service, tmp_path):
        """Тест несовпадения числа элементов с n_r·n_t"""
        path = tmp_path / "short.json"
        path.write_text(json.dumps({"n_r": 2, "n_t": 2, "entries": [[1.0, 0.0]]}), encoding="utf-8")

        with pytest.raises(ChannelParseError):
            channel_service.load_channel(path)

    def test_json_missing_field_location(self, channel_service, tmp_path):
        """Тест указания поля при ошибке схемы JSON"""
        path = tmp_path / "missing.json"
        path.write_text(json.dumps({"n_r": 1, "entries": [[1.0, 0.0]]}), encoding="utf-8")

        with pytest.raises(ChannelParseError) as exc_info:
            channel_service.load_channel(path)
        assert exc_info.value.location == "n_t"

    def test_missing_file(self, channel_service, tmp_path):
        """Тест отсутствующего файла"""
        with pytest.raises(ChannelParseError):
            channel_service.load_channel(tmp_path / "absent.json")

    def test_capacity_rank_one_at_high_power(self, channel_service):
        """Тест канала ранга 1 при P=1e8: совпадает с обратным каналом 1x6"""
        channel = channel_service.gen_gaussian(1, 6, seed=3)
        report = channel_service.capacity(channel, 1e8)
        expected = math.log2(1.0 + 1e8 * float(np.sum(np.abs(channel.H) ** 2)))

        assert math.isclose(report.capacity_bits, expected, abs_tol=1e-4)
        assert math.isclose(report.capacity_bits,
                            channel_service.capacity(channel.reciprocal(), 1e8).capacity_bits,
                            abs_tol=1e-4)
        assert min(report.spectrum) >= 1.0


@hyp_settings(max_examples=30, deadline=None)
@given(n_t=st.integers(1, 5), n_r=st.integers(1, 5), seed=st.integers(0, 2**63 - 1),
       power=st.sampled_from([0.01, 1.0, 100.0]))
def test_capacity_is_permutation_invariant(n_t, n_r, seed, power):
    """Тест независимости пропускной способности от нумерации антенн"""
    channel = channel_service.gen_gaussian(n_t, n_r, seed)
    rng = np.random.default_rng(seed)
    shuffled = MimoChannel(H=channel.H[np.ix_(rng.permutation(n_r), rng.permutation(n_t))])

    assert math.isclose(channel_service.capacity(shuffled, power).capacity_bits,
                        channel_service.capacity(channel, power).capacity_bits,
                        rel_tol=1e-10, abs_tol=1e-12)


@hyp_settings(max_examples=30, deadline=None)
@given(n_t=st.integers(1, 5), n_r=st.integers(1, 5), seed=st.integers(0, 2**63 - 1),
       power=st.sampled_from([0.01, 1.0, 100.0]))
def test_power_absorbed_into_channel(n_t, n_r, seed, power):
    """Тест C(√P·H, 1) = C(H, P)"""
    channel = channel_service.gen_gaussian(n_t, n_r, seed)
    scaled = MimoChannel(H=math.sqrt(power) * channel.H)

    assert math.isclose(channel_service.capacity(scaled, 1.0).capacity_bits,
                        channel_service.capacity(channel, power).capacity_bits,
                        rel_tol=1e-10, abs_tol=1e-12)


@hyp_settings(max_examples=30, deadline=None)
@given(n_t=st.integers(1, 5), n_r=st.integers(1, 5), seed=st.integers(0, 2**63 - 1),
       power=st.sampled_from([0.01, 1.0, 100.0]), data=st.data())
def test_capacity_grows_with_nested_subsets(n_t, n_r, seed, power, data):
    """Тест монотонности: вложенный подканал не лучше объемлющего"""
    channel = channel_service.gen_gaussian(n_t, n_r, seed)
    outer_tx = sorted(data.draw(st.sets(st.integers(1, n_t), min_size=1)))
    outer_rx = sorted(data.draw(st.sets(st.integers(1, n_r), min_size=1)))
    inner_tx = sorted(data.draw(st.sets(st.sampled_from(outer_tx), min_size=1)))
    inner_rx = sorted(data.draw(st.sets(st.sampled_from(outer_rx), min_size=1)))

    outer = channel_service.subchannel(
        channel, SubsetIndex.of(n_t, outer_tx), SubsetIndex.of(n_r, outer_rx))
    inner = channel_service.subchannel(
        channel, SubsetIndex.of(n_t, inner_tx), SubsetIndex.of(n_r, inner_rx))

    assert (channel_service.capacity(inner, power).capacity_bits
            <= channel_service.capacity(outer, power).capacity_bits + 1e-9)
