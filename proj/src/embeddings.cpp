#include "cframe/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cframe/errors.hpp"

namespace cframe {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool is_header(const std::vector<std::string_view>& fields, std::size_t& dim) {
    if (fields.size() != 2) return false;
    std::size_t count = 0;
    return parse_number(fields[0], count) && parse_number(fields[1], dim) && dim > 0;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InputError("embedding dimension must be positive");
}

bool EmbeddingTable::contains(std::string_view word) const {
    return index_.find(std::string(word)) != index_.end();
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

std::span<const double> EmbeddingTable::at(std::string_view word) const {
    auto v = find(word);
    if (!v) throw LookupError("no embedding for '" + std::string(word) + "'");
    return *v;
}

bool EmbeddingTable::add(std::string word, std::span<const double> vector) {
    if (vector.size() != dim_)
        throw ShapeError("embedding for '" + word + "' has " + std::to_string(vector.size()) +
                         " values, expected " + std::to_string(dim_));
    if (index_.contains(word)) return false;
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
}

EmbeddingTable read_embeddings(std::istream& in, std::optional<std::size_t> expected_dim) {
    if (expected_dim && *expected_dim == 0) throw InputError("expected embedding dimension must be positive");
    std::optional<EmbeddingTable> table;
    std::optional<std::size_t> dim = expected_dim;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (!seen_content) {
            seen_content = true;
            std::size_t header_dim = 0;
            if (is_header(fields, header_dim)) {
                if (dim && *dim != header_dim)
                    throw FormatError("line " + std::to_string(line_no) + ": header declares dimension " +
                                      std::to_string(header_dim) + ", expected " + std::to_string(*dim));
                dim = header_dim;
                continue;
            }
        }
        const std::size_t got = fields.size() - 1;
        if (!dim) dim = got;
        if (got != *dim || got == 0)
            throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(*dim) +
                              " values, found " + std::to_string(got));
        values.resize(got);
        for (std::size_t i = 0; i < got; ++i)
            if (!parse_number(fields[i + 1], values[i]))
                throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                                  std::string(fields[i + 1]) + "'");
        if (!table) table.emplace(*dim);
        table->add(std::string(fields[0]), values);
    }
    if (!table) throw FormatError("embedding file contains no vectors");
    return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open embeddings file " + path.string());
    return read_embeddings(in, expected_dim);
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw ShapeError("cosine of vectors with lengths " + std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
    const double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw DomainError("cosine undefined for a zero-norm vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

std::vector<Neighbor> nearest_neighbors(std::string_view query, std::size_t k,
                                        std::span<const std::string> candidates,
                                        const EmbeddingTable& table) {
    if (k == 0) throw InputError("k must be positive");
    if (candidates.empty()) throw InputError("no candidates for nearest-neighbor search");
    const auto q = table.at(query);
    if (norm(q) == 0.0) throw DomainError("query '" + std::string(query) + "' has a zero vector");

    std::vector<Neighbor> scored;
    scored.reserve(candidates.size());
    for (const auto& c : candidates) {
        auto v = table.find(c);
        if (!v || norm(*v) == 0.0) continue;
        scored.push_back({c, cosine(q, *v)});
    }
    if (scored.empty()) throw LookupError("none of the candidates has an embedding");

    auto better = [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.word < b.word;
    };
    const std::size_t keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
    scored.resize(keep);
    return scored;
}

}  // namespace cframe
