#include "crystalbench/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include "crystalbench/errors.hpp"

namespace crystalbench {

namespace {

// Row-major odometer; returns false after the last coordinate.
bool next_coords(std::vector<std::size_t>& coords, std::span<const std::size_t> sizes) {
    for (std::size_t j = coords.size(); j-- > 0;) {
        if (++coords[j] < sizes[j]) return true;
        coords[j] = 0;
    }
    return false;
}

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> sizes) {
    std::vector<std::size_t> strides(sizes.size(), 1);
    for (std::size_t j = sizes.size(); j-- > 1;) strides[j - 1] = strides[j] * sizes[j];
    return strides;
}

std::size_t product(std::span<const std::size_t> sizes) {
    std::size_t total = 1;
    for (std::size_t s : sizes) total *= s;
    return total;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* op) {
    if (!(a == b)) throw ParameterError(std::string(op) + ": mismatched grids");
}

} // namespace

GridSpec::GridSpec(std::vector<int> resolution, std::vector<int> extent, std::uint64_t budget)
    : resolution_(std::move(resolution)), extent_(std::move(extent)) {
    if (resolution_.empty() || resolution_.size() != extent_.size())
        throw ParameterError("grid needs one resolution and one extent per axis");
    if (budget > kHardCap) throw ParameterError("cell budget exceeds the hard cap of 2^36 cells");
    std::int64_t log_total = 0;
    for (std::size_t j = 0; j < resolution_.size(); ++j) {
        if (resolution_[j] > extent_[j])
            throw ParameterError("grid axis " + std::to_string(j) + ": resolution coarser than extent");
        log_total += static_cast<std::int64_t>(extent_[j]) - resolution_[j];
    }
    const std::uint64_t required =
        log_total > 62 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << log_total;
    if (required > budget) throw ResourceError("grid exceeds the cell budget", required, budget);
    for (std::size_t j = 0; j < resolution_.size(); ++j)
        sizes_.push_back(std::size_t{1} << (extent_[j] - resolution_[j]));
    total_ = static_cast<std::size_t>(required);
}

std::int64_t GridSpec::cell_volume_exponent() const {
    std::int64_t sum = 0;
    for (int r : resolution_) sum += r;
    return sum;
}

GridSpec GridSpec::refined(int levels, std::uint64_t budget) const {
    std::vector<int> finer(resolution_);
    for (int& r : finer) r -= levels;
    return GridSpec(std::move(finer), extent_, budget);
}

std::size_t flat_index(std::span<const std::size_t> sizes, std::span<const std::size_t> coords) {
    std::size_t index = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) index = index * sizes[j] + coords[j];
    return index;
}

CellMask::CellMask(GridSpec grid) : grid_(std::move(grid)), bits_(grid_.total_cells(), 0) {}

CellMask::CellMask(GridSpec grid, std::vector<std::uint8_t> bits)
    : grid_(std::move(grid)), bits_(std::move(bits)) {
    if (bits_.size() != grid_.total_cells()) throw ParameterError("CellMask: bit count does not match grid");
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::uint64_t CellMask::popcount() const {
    return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

DyadicRational CellMask::measure() const {
    return {BigInt(popcount()), grid_.cell_volume_exponent()};
}

bool CellMask::is_subset_of(const CellMask& other) const {
    require_same_grid(grid_, other.grid_, "is_subset_of");
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i]) return false;
    return true;
}

CellMask mask_union(const CellMask& x, const CellMask& y) {
    require_same_grid(x.grid(), y.grid(), "mask_union");
    CellMask out(x.grid());
    for (std::size_t i = 0; i < x.grid().total_cells(); ++i) out.set(i, x.test(i) || y.test(i));
    return out;
}

CellMask mask_intersect(const CellMask& x, const CellMask& y) {
    require_same_grid(x.grid(), y.grid(), "mask_intersect");
    CellMask out(x.grid());
    for (std::size_t i = 0; i < x.grid().total_cells(); ++i) out.set(i, x.test(i) && y.test(i));
    return out;
}

CellAverage CellAverage::make(std::uint64_t count, int shift) {
    if (shift < 0 || shift > 62) throw ParameterError("CellAverage: shift outside [0, 62]");
    if (count == 0) return {0, 0};
    const int strip = std::min(std::countr_zero(count), shift);
    return {count >> strip, shift - strip};
}

std::strong_ordering operator<=>(const CellAverage& a, const CellAverage& b) {
    // a.count / 2^a.shift vs b.count / 2^b.shift; cross-multiplied in 128 bits.
    const int base = std::min(a.shift, b.shift);
    const unsigned __int128 lhs = static_cast<unsigned __int128>(a.count) << (b.shift - base);
    const unsigned __int128 rhs = static_cast<unsigned __int128>(b.count) << (a.shift - base);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

AverageField::AverageField(GridSpec grid) : grid_(std::move(grid)), values_(grid_.total_cells()) {}

AverageField::AverageField(GridSpec grid, std::vector<CellAverage> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.total_cells())
        throw ParameterError("AverageField: value count does not match grid");
}

void AverageField::merge_max(const AverageField& other) {
    require_same_grid(grid_, other.grid_, "merge_max");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (other.values_[i] > values_[i]) values_[i] = other.values_[i];
}

CellMask rasterize(const CrystalND& crystal, const GridSpec& grid) {
    if (crystal.dimension() != grid.dimension())
        throw ParameterError("rasterize: crystal and grid dimensions differ");
    std::vector<DyadicSet1D> axes;
    axes.reserve(grid.dimension());
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        axes.push_back(crystal.factor(j).rasterize(grid.resolution(j), grid.extent(j)));

    CellMask mask(grid);
    std::vector<std::size_t> coords(grid.dimension(), 0);
    std::size_t index = 0;
    do {
        bool inside = true;
        for (std::size_t j = 0; j < coords.size() && inside; ++j) inside = axes[j].test(coords[j]);
        mask.set(index++, inside);
    } while (next_coords(coords, grid.sizes()));
    return mask;
}

PrefixTable::PrefixTable(const CellMask& mask) : grid_(mask.grid()) {
    const std::size_t n = grid_.dimension();
    for (std::size_t j = 0; j < n; ++j) padded_sizes_.push_back(grid_.cells_on_axis(j) + 1);
    padded_strides_ = row_major_strides(padded_sizes_);
    table_.assign(product(padded_sizes_), 0);

    std::vector<std::size_t> coords(n, 0);
    std::size_t index = 0;
    do {
        if (mask.test(index)) {
            std::size_t padded = 0;
            for (std::size_t j = 0; j < n; ++j) padded += (coords[j] + 1) * padded_strides_[j];
            table_[padded] = 1;
        }
        ++index;
    } while (next_coords(coords, grid_.sizes()));

    for (std::size_t axis = 0; axis < n; ++axis) {
        const std::size_t stride = padded_strides_[axis];
        for (std::size_t i = 0; i < table_.size(); ++i)
            if ((i / stride) % padded_sizes_[axis] != 0) table_[i] += table_[i - stride];
    }
}

std::uint64_t PrefixTable::box_sum(std::span<const std::size_t> lo, std::span<const std::size_t> hi) const {
    const std::size_t n = padded_sizes_.size();
    std::int64_t sum = 0;
    for (std::uint32_t corner = 0; corner < (1u << n); ++corner) {
        std::size_t index = 0;
        for (std::size_t j = 0; j < n; ++j) index += ((corner >> j) & 1u ? hi[j] : lo[j]) * padded_strides_[j];
        const bool positive = ((n - static_cast<std::size_t>(std::popcount(corner))) % 2) == 0;
        sum += positive ? static_cast<std::int64_t>(table_[index]) : -static_cast<std::int64_t>(table_[index]);
    }
    return static_cast<std::uint64_t>(sum);
}

std::uint64_t PrefixTable::total() const {
    const std::vector<std::size_t> lo(grid_.dimension(), 0);
    return box_sum(lo, grid_.sizes());
}

std::vector<std::size_t> shape_window(const GridSpec& grid, const Shape& shape) {
    if (shape.dimension() != grid.dimension())
        throw ParameterError("shape " + shape.to_string() + " has the wrong dimension for the grid");
    std::vector<std::size_t> window;
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        if (shape[j] < grid.resolution(j))
            throw ParameterError("shape " + shape.to_string() + " is finer than the grid on axis " +
                                 std::to_string(j));
        if (shape[j] > grid.extent(j))
            throw ParameterError("shape " + shape.to_string() + " does not fit in the grid on axis " +
                                 std::to_string(j));
        window.push_back(std::size_t{1} << (shape[j] - grid.resolution(j)));
    }
    return window;
}

bool shape_fits(const GridSpec& grid, const Shape& shape) {
    if (shape.dimension() != grid.dimension()) return false;
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        if (shape[j] < grid.resolution(j) || shape[j] > grid.extent(j)) return false;
    return true;
}

ShapeAverages shape_average_field(const PrefixTable& table, const Shape& shape) {
    const GridSpec& grid = table.grid();
    ShapeAverages out;
    out.shape = shape;
    out.window = shape_window(grid, shape);
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        out.positions.push_back(grid.cells_on_axis(j) - out.window[j] + 1);
        out.shift += shape[j] - grid.resolution(j);
    }
    out.counts.resize(product(out.positions));

    std::vector<std::size_t> lo(grid.dimension(), 0);
    std::vector<std::size_t> hi(out.window);
    std::size_t index = 0;
    do {
        for (std::size_t j = 0; j < lo.size(); ++j) hi[j] = lo[j] + out.window[j];
        out.counts[index++] = table.box_sum(lo, hi);
    } while (next_coords(lo, out.positions));
    return out;
}

ShapeAverages shape_average_field(const CellMask& mask, const Shape& shape) {
    return shape_average_field(PrefixTable(mask), shape);
}

namespace {

// Along `axis`, out[x] = max of in[p] over translates p in [x - window + 1, x]
// (clipped to the valid range). The axis grows from `positions` to `cells`.
std::vector<std::uint64_t> expand_axis_max(const std::vector<std::uint64_t>& in,
                                           std::vector<std::size_t>& dims, std::size_t axis,
                                           std::size_t cells, std::size_t window) {
    const std::size_t positions = dims[axis];
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < axis; ++k) outer *= dims[k];
    for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= dims[k];

    std::vector<std::uint64_t> out(outer * cells * inner);
    std::vector<std::size_t> queue(positions);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t t = 0; t < inner; ++t) {
            const std::uint64_t* src = in.data() + o * positions * inner + t;
            std::uint64_t* dst = out.data() + o * cells * inner + t;
            std::size_t head = 0, tail = 0;
            for (std::size_t x = 0; x < cells; ++x) {
                if (x < positions) {
                    while (tail > head && src[queue[tail - 1] * inner] <= src[x * inner]) --tail;
                    queue[tail++] = x;
                }
                while (queue[head] + window <= x) ++head;
                dst[x * inner] = src[queue[head] * inner];
            }
        }
    }
    dims[axis] = cells;
    return out;
}

void accumulate_shape(const PrefixTable& table, const Shape& shape, AverageField& acc) {
    const ShapeAverages averages = shape_average_field(table, shape);
    std::vector<std::size_t> dims(averages.positions);
    std::vector<std::uint64_t> values = averages.counts;
    for (std::size_t axis = 0; axis < dims.size(); ++axis)
        values = expand_axis_max(values, dims, axis, table.grid().cells_on_axis(axis), averages.window[axis]);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const CellAverage candidate = CellAverage::make(values[i], averages.shift);
        if (candidate > acc[i]) acc[i] = candidate;
    }
}

} // namespace

AverageField maximal_field(const PrefixTable& table, std::span<const Shape> shapes, MaximalOptions options) {
    for (const Shape& shape : shapes) shape_window(table.grid(), shape);  // validate up front

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(shapes.size(), 1)));

    AverageField result(table.grid());
    if (threads <= 1) {
        for (const Shape& shape : shapes) accumulate_shape(table, shape, result);
        return result;
    }
    std::vector<AverageField> partial(threads, AverageField(table.grid()));
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w)
            workers.emplace_back([&, w] {
                for (std::size_t s = w; s < shapes.size(); s += threads) accumulate_shape(table, shapes[s], partial[w]);
            });
    }
    for (const AverageField& part : partial) result.merge_max(part);
    return result;
}

AverageField maximal_field(const CellMask& mask, std::span<const Shape> shapes, MaximalOptions options) {
    return maximal_field(PrefixTable(mask), shapes, options);
}

const char* to_string(Comparison comparison) {
    return comparison == Comparison::AtLeast ? "closed (>=)" : "strict (>)";
}

namespace {

// Smallest count c with c * 2^-shift satisfying the comparison, if any fits in 64 bits.
std::optional<std::uint64_t> min_qualifying_count(const DyadicRational& threshold, int shift,
                                                  Comparison comparison) {
    if (threshold.sign() < 0) return 0;
    if (threshold.is_zero()) return comparison == Comparison::AtLeast ? 0 : 1;
    const std::int64_t k = threshold.exponent() + shift;
    BigInt bound;
    if (k >= 0) {
        bound = threshold.mantissa() << static_cast<unsigned>(k);
        if (comparison == Comparison::Exceeds) bound += 1;
    } else {
        // Odd mantissa: threshold * 2^shift is not an integer, so both comparisons agree.
        bound = (threshold.mantissa() >> static_cast<unsigned>(-k)) + 1;
    }
    if (bound > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(bound);
}

} // namespace

CellMask superlevel_mask(const AverageField& field, const DyadicRational& threshold, Comparison comparison) {
    std::map<int, std::optional<std::uint64_t>> bounds;
    CellMask mask(field.grid());
    for (std::size_t i = 0; i < field.grid().total_cells(); ++i) {
        const CellAverage& v = field[i];
        auto it = bounds.find(v.shift);
        if (it == bounds.end()) it = bounds.emplace(v.shift, min_qualifying_count(threshold, v.shift, comparison)).first;
        mask.set(i, it->second && v.count >= *it->second);
    }
    return mask;
}

DyadicRational superlevel_measure(const AverageField& field, const DyadicRational& threshold, Comparison comparison) {
    return superlevel_mask(field, threshold, comparison).measure();
}

AnchoredUnion anchored_union_inclusion_exclusion(std::span<const Shape> shapes) {
    const std::size_t count = shapes.size();
    if (count > kInclusionExclusionLimit)
        throw ParameterError("inclusion-exclusion limited to " + std::to_string(kInclusionExclusionLimit) + " shapes");
    AnchoredUnion out;
    out.exclusive.assign(count, DyadicRational{});
    if (count == 0) return out;
    const std::size_t n = shapes[0].dimension();
    for (const Shape& s : shapes)
        if (s.dimension() != n) throw ParameterError("anchored union: shapes of different dimension");

    // Volume exponents of all intersections lie in [low, high].
    std::int64_t low = 0, high = std::numeric_limits<std::int64_t>::min();
    for (std::size_t j = 0; j < n; ++j) {
        int m = shapes[0][j];
        for (const Shape& s : shapes) m = std::min(m, s[j]);
        low += m;
    }
    for (const Shape& s : shapes) high = std::max(high, s.volume_exponent());
    const auto span_size = static_cast<std::size_t>(high - low + 1);

    // |R_i \ U_{j != i} R_j| = sum over subsets T containing i of (-1)^{|T|+1} |∩T|.
    std::vector<std::int64_t> union_coeff(span_size, 0);
    std::vector<std::vector<std::int64_t>> exclusive_coeff(count, std::vector<std::int64_t>(span_size, 0));
    const std::size_t subsets = std::size_t{1} << count;
    std::vector<int> mins(subsets * n);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        const auto last = static_cast<std::size_t>(std::countr_zero(mask));
        const std::size_t rest = mask & (mask - 1);
        std::int64_t volume = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const int e = rest ? std::min(mins[rest * n + j], shapes[last][j]) : shapes[last][j];
            mins[mask * n + j] = e;
            volume += e;
        }
        const std::int64_t sign = std::popcount(mask) % 2 ? 1 : -1;
        const auto slot = static_cast<std::size_t>(volume - low);
        union_coeff[slot] += sign;
        for (std::size_t bits = mask; bits; bits &= bits - 1)
            exclusive_coeff[static_cast<std::size_t>(std::countr_zero(bits))][slot] += sign;
    }
    auto collect = [&](const std::vector<std::int64_t>& coeff) {
        DyadicRational total;
        for (std::size_t k = 0; k < coeff.size(); ++k)
            if (coeff[k]) total += DyadicRational(BigInt(coeff[k]), low + static_cast<std::int64_t>(k));
        return total;
    };
    out.union_measure = collect(union_coeff);
    for (std::size_t i = 0; i < count; ++i) out.exclusive[i] = collect(exclusive_coeff[i]);
    return out;
}

AnchoredUnion anchored_union_grid(std::span<const Shape> shapes, std::uint64_t budget) {
    AnchoredUnion out;
    out.used_grid = true;
    out.exclusive.assign(shapes.size(), DyadicRational{});
    if (shapes.empty()) return out;
    const std::size_t n = shapes[0].dimension();
    for (const Shape& s : shapes)
        if (s.dimension() != n) throw ParameterError("anchored union: shapes of different dimension");

    // Compressed coordinates: on each axis, cell c spans [2^{e_{c-1}}, 2^{e_c}] (cell 0 starts at 0).
    std::vector<std::vector<int>> breaks(n);
    std::vector<std::vector<DyadicRational>> lengths(n);
    std::vector<std::size_t> sizes(n);
    std::uint64_t cells = 1;
    for (std::size_t j = 0; j < n; ++j) {
        for (const Shape& s : shapes) breaks[j].push_back(s[j]);
        std::sort(breaks[j].begin(), breaks[j].end());
        breaks[j].erase(std::unique(breaks[j].begin(), breaks[j].end()), breaks[j].end());
        for (std::size_t c = 0; c < breaks[j].size(); ++c)
            lengths[j].push_back(c == 0 ? DyadicRational::pow2(breaks[j][0])
                                        : DyadicRational::pow2(breaks[j][c]) - DyadicRational::pow2(breaks[j][c - 1]));
        sizes[j] = breaks[j].size();
        cells *= sizes[j];
        if (cells > budget) throw ResourceError("anchored union grid exceeds the cell budget", cells, budget);
    }

    std::vector<std::vector<std::size_t>> reach(shapes.size(), std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < shapes.size(); ++i)
        for (std::size_t j = 0; j < n; ++j)
            reach[i][j] = static_cast<std::size_t>(
                std::lower_bound(breaks[j].begin(), breaks[j].end(), shapes[i][j]) - breaks[j].begin() + 1);

    std::vector<std::uint32_t> coverage(static_cast<std::size_t>(cells), 0);
    std::vector<std::uint32_t> owner(static_cast<std::size_t>(cells), 0);
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        std::vector<std::size_t> coords(n, 0);
        do {
            const std::size_t index = flat_index(sizes, coords);
            ++coverage[index];
            owner[index] = static_cast<std::uint32_t>(i);
        } while (next_coords(coords, reach[i]));
    }

    std::vector<std::size_t> coords(n, 0);
    std::size_t index = 0;
    do {
        if (coverage[index]) {
            DyadicRational volume = DyadicRational::integer(1);
            for (std::size_t j = 0; j < n; ++j) volume *= lengths[j][coords[j]];
            out.union_measure += volume;
            if (coverage[index] == 1) out.exclusive[owner[index]] += volume;
        }
        ++index;
    } while (next_coords(coords, sizes));
    return out;
}

AnchoredUnion anchored_union_measure(std::span<const Shape> shapes) {
    if (shapes.size() <= kInclusionExclusionLimit) return anchored_union_inclusion_exclusion(shapes);
    return anchored_union_grid(shapes);
}

namespace {

constexpr char kMagic[8] = {'C', 'B', 'F', 'I', 'E', 'L', 'D', '\0'};
constexpr std::uint32_t kDumpVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}
void put_u64(std::ostream& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}
std::uint64_t get_le(std::istream& in, int bytes) {
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) throw ParameterError("field dump truncated");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
    }
    return v;
}

void put_header(std::ostream& out, std::uint32_t kind, const GridSpec& grid) {
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kDumpVersion);
    put_u32(out, kind);
    put_u32(out, static_cast<std::uint32_t>(grid.dimension()));
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        put_u32(out, static_cast<std::uint32_t>(grid.resolution(j)));
        put_u32(out, static_cast<std::uint32_t>(grid.extent(j)));
    }
}

} // namespace

void write_field(std::ostream& out, const CellMask& mask) {
    put_header(out, 1, mask.grid());
    const std::size_t total = mask.grid().total_cells();
    for (std::size_t base = 0; base < total; base += 64) {
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < 64 && base + b < total; ++b)
            if (mask.test(base + b)) word |= std::uint64_t{1} << b;
        put_u64(out, word);
    }
}

void write_field(std::ostream& out, const AverageField& field) {
    put_header(out, 2, field.grid());
    for (const CellAverage& v : field.values()) {
        put_u64(out, v.count);
        put_u64(out, static_cast<std::uint64_t>(v.shift));
    }
}

std::variant<CellMask, AverageField> read_field(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ParameterError("not a field dump (bad magic)");
    if (get_le(in, 4) != kDumpVersion) throw ParameterError("unsupported field dump version");
    const auto kind = static_cast<std::uint32_t>(get_le(in, 4));
    const auto n = static_cast<std::size_t>(get_le(in, 4));
    std::vector<int> resolution(n), extent(n);
    for (std::size_t j = 0; j < n; ++j) {
        resolution[j] = static_cast<std::int32_t>(static_cast<std::uint32_t>(get_le(in, 4)));
        extent[j] = static_cast<std::int32_t>(static_cast<std::uint32_t>(get_le(in, 4)));
    }
    GridSpec grid(std::move(resolution), std::move(extent), GridSpec::kHardCap);
    const std::size_t total = grid.total_cells();
    if (kind == 1) {
        std::vector<std::uint8_t> bits(total);
        for (std::size_t base = 0; base < total; base += 64) {
            const std::uint64_t word = get_le(in, 8);
            for (std::size_t b = 0; b < 64 && base + b < total; ++b) bits[base + b] = (word >> b) & 1u;
        }
        return CellMask(std::move(grid), std::move(bits));
    }
    if (kind == 2) {
        std::vector<CellAverage> values(total);
        for (auto& v : values) {
            v.count = get_le(in, 8);
            v.shift = static_cast<int>(get_le(in, 8));
        }
        return AverageField(std::move(grid), std::move(values));
    }
    throw ParameterError("unknown field dump kind");
}

} // namespace crystalbench
