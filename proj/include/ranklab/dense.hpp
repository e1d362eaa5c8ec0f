#pragma once

// Small dense matrices over a runtime field. Used for representation
// matrices, group closures over finite fields, and as the serial reference
// oracle for the sparse rank kernels.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ranklab/field.hpp"

namespace ranklab {

struct DenseMat {
    FieldPtr field;
    std::size_t rows = 0, cols = 0;
    std::vector<FieldValue> a;

    FieldValue& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const FieldValue& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

DenseMat dense_zero(FieldPtr F, std::size_t rows, std::size_t cols);
DenseMat dense_identity(FieldPtr F, std::size_t n);
DenseMat dense_add(const DenseMat& x, const DenseMat& y);
DenseMat dense_mul(const DenseMat& x, const DenseMat& y);
bool dense_equal(const DenseMat& x, const DenseMat& y);
bool dense_is_identity(const DenseMat& x);

// Gauss-Jordan; nullopt when singular.
std::optional<DenseMat> dense_inverse(const DenseMat& x);

// Serial elimination over the field; destroys its copy of the input.
std::size_t dense_rank(DenseMat x);

DenseMat dense_map(const DenseMat& x, FieldPtr target,
                   const std::function<FieldValue(const FieldValue&)>& f);

std::string dense_str(const DenseMat& x);

}  // namespace ranklab
