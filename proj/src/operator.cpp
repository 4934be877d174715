#include "adiclab/operator.hpp"

#include <algorithm>

namespace adiclab {

TreeSpace::TreeSpace(unsigned s, unsigned depth) : s_(s), depth_(depth)
{
    if (s < 2) throw std::invalid_argument("s must be >= 2");
    offsets_.reserve(depth + 2);
    std::size_t acc = 0;
    for (unsigned n = 0; n <= depth + 1; ++n) {
        offsets_.push_back(acc);
        if (n <= depth) acc += ipow(s, n);
    }
    if (acc > 0xFFFFFFFFu) throw std::overflow_error("truncated space too large for 32-bit row indices");
}

namespace detail {

void normalize_column(Column& col)
{
    if (col.empty()) return;
    bool sorted = true;
    for (std::size_t i = 1; i < col.size(); ++i)
        if (col[i - 1].row >= col[i].row) {
            sorted = false;
            break;
        }
    if (sorted) {
        std::erase_if(col, [](const Entry& e) { return e.value.is_zero(); });
        return;
    }
    // Sort (row, position) keys rather than the entries themselves.
    std::vector<std::uint64_t> keys(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) keys[i] = (std::uint64_t{col[i].row} << 32) | i;
    std::sort(keys.begin(), keys.end());
    Column out;
    out.reserve(col.size());
    for (std::size_t r = 0; r < keys.size();) {
        const auto row = static_cast<std::uint32_t>(keys[r] >> 32);
        QuadScalar acc = std::move(col[keys[r] & 0xFFFFFFFFu].value);
        std::size_t k = r + 1;
        for (; k < keys.size() && (keys[k] >> 32) == row; ++k) acc += col[keys[k] & 0xFFFFFFFFu].value;
        if (!acc.is_zero()) out.push_back(Entry{row, std::move(acc)});
        r = k;
    }
    col = std::move(out);
}

Column multiply_column(const std::vector<Column>& a_cols, const Column& b_col)
{
    Column out;
    if (b_col.empty()) return out;
    if (b_col.size() == 1) {
        const auto& [r, v] = b_col.front();
        out = a_cols[r];
        for (auto& e : out) e.value *= v;
        normalize_column(out);
        return out;
    }
    std::size_t total = 0;
    for (const auto& e : b_col) total += a_cols[e.row].size();
    out.reserve(total);
    for (const auto& [r, v] : b_col)
        for (const auto& e : a_cols[r]) out.push_back(Entry{e.row, e.value * v});
    normalize_column(out);
    return out;
}

Column multiply_column_reference(const std::vector<Column>& a_cols, const Column& b_col)
{
    std::map<std::uint32_t, QuadScalar> acc;
    for (const auto& [r, v] : b_col)
        for (const auto& e : a_cols[r]) acc[e.row] += e.value * v;
    Column out;
    for (auto& [row, value] : acc)
        if (!value.is_zero()) out.push_back(Entry{row, std::move(value)});
    return out;
}

Column add_columns(const Column& a, const Column& b, bool subtract)
{
    Column out;
    out.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].row < b[q].row)) {
            out.push_back(a[p++]);
        } else if (p == a.size() || b[q].row < a[p].row) {
            out.push_back(Entry{b[q].row, subtract ? -b[q].value : b[q].value});
            ++q;
        } else {
            QuadScalar v = subtract ? a[p].value - b[q].value : a[p].value + b[q].value;
            if (!v.is_zero()) out.push_back(Entry{a[p].row, std::move(v)});
            ++p;
            ++q;
        }
    }
    return out;
}

}  // namespace detail
}  // namespace adiclab
