#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "puedet/matrix.hpp"

namespace puedet {

// Ordered collection of named parameters with a parallel gradient buffer of
// identical shapes. Owns the storage for one network.
class ParamStore {
public:
    Matrix& add(const std::string& name, std::size_t rows, std::size_t cols);

    bool has(const std::string& name) const { return index_.count(name) != 0; }

    Matrix& value(const std::string& name);
    const Matrix& value(const std::string& name) const;
    Matrix& grad(const std::string& name);
    const Matrix& grad(const std::string& name) const;

    std::size_t count() const { return names_.size(); }
    const std::string& name_at(std::size_t i) const { return names_[i]; }
    Matrix& value_at(std::size_t i) { return values_[i]; }
    const Matrix& value_at(std::size_t i) const { return values_[i]; }
    Matrix& grad_at(std::size_t i) { return grads_[i]; }
    const Matrix& grad_at(std::size_t i) const { return grads_[i]; }

    std::size_t total_coords() const;
    void zero_grads();
    double grad_norm() const;
    void scale_grads(double factor);

    bool operator==(const ParamStore& o) const {
        return names_ == o.names_ && values_ == o.values_;
    }

    // Versioned text checkpoint: header key/value pairs, then each parameter
    // as name, shape, and row-major values. Doubles are printed with 17
    // significant digits, so save -> load -> save is byte-identical.
    void save(std::ostream& out,
              const std::vector<std::pair<std::string, std::string>>& header) const;
    static ParamStore load(std::istream& in,
                           std::vector<std::pair<std::string, std::string>>& header);

private:
    std::size_t index_of(const std::string& name) const;

    std::vector<std::string> names_;
    std::vector<Matrix> values_;
    std::vector<Matrix> grads_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace puedet
