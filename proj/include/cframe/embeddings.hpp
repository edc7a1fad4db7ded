#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cframe {

// Word -> fixed-dimension vector table, immutable once loaded.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool contains(std::string_view word) const;

    // Empty optional when the word is absent; a stored zero vector is returned as such.
    std::optional<std::span<const double>> find(std::string_view word) const;
    // LookupError when absent.
    std::span<const double> at(std::string_view word) const;

    const std::vector<std::string>& words() const noexcept { return words_; }

    // Returns false (and stores nothing) if the word is already present.
    // ShapeError when the vector length differs from dim().
    bool add(std::string word, std::span<const double> vector);

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Text format: "word v1 ... vd" per line, optional leading "count dim" header.
// Dimension is taken from expected_dim, the header, or the first row, in that order.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_dim = std::nullopt);
EmbeddingTable read_embeddings(std::istream& in, std::optional<std::size_t> expected_dim = std::nullopt);

double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
    std::string word;
    double similarity = 0.0;
};

// Top-k candidates by cosine to the query, descending, ties by word.
// Candidates absent from the table or with zero norm are skipped.
std::vector<Neighbor> nearest_neighbors(std::string_view query, std::size_t k,
                                        std::span<const std::string> candidates,
                                        const EmbeddingTable& table);

}  // namespace cframe
