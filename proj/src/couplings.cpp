#include "syknqs/couplings.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace syknqs {

namespace {

std::string hex_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

double parse_hex_double(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);
}

}  // namespace

CouplingTensor::CouplingTensor(int num_sites, std::uint64_t seed)
    : num_sites_(num_sites),
      seed_(seed),
      num_pairs_(num_sites * (num_sites - 1) / 2),
      pair_matrix_(static_cast<std::size_t>(num_pairs_) * num_pairs_) {}

int CouplingTensor::pair_index(int i, int j) const {
    return i * num_sites_ - i * (i + 1) / 2 + (j - i - 1);
}

CouplingTensor CouplingTensor::sample(int num_sites, std::uint64_t seed) {
    if (num_sites < 4 || num_sites % 2 != 0) {
        throw std::invalid_argument("CouplingTensor: num_sites must be even and >= 4");
    }
    CouplingTensor tensor(num_sites, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double half = std::sqrt(0.5);
    const int P = tensor.num_pairs_;
    // Upper triangle of the Hermitian pair matrix, row by row. Diagonal
    // entries map to their own conjugate, so they are real with variance 1;
    // off-diagonal entries are complex with E|J|^2 = 1.
    for (int p = 0; p < P; ++p) {
        tensor.pair_matrix_[p * P + p] = normal(rng);
        for (int q = p + 1; q < P; ++q) {
            std::complex<double> z(normal(rng) * half, normal(rng) * half);
            tensor.pair_matrix_[p * P + q] = z;
            tensor.pair_matrix_[q * P + p] = std::conj(z);
        }
    }
    return tensor;
}

std::complex<double> CouplingTensor::at(int i, int j, int k, int l) const {
    if (i < 0 || j < 0 || k < 0 || l < 0 || i >= num_sites_ || j >= num_sites_ ||
        k >= num_sites_ || l >= num_sites_) {
        throw std::invalid_argument("CouplingTensor::at: index out of range");
    }
    if (i == j || k == l) return 0.0;
    double sign = 1.0;
    if (i > j) {
        std::swap(i, j);
        sign = -sign;
    }
    if (k > l) {
        std::swap(k, l);
        sign = -sign;
    }
    return sign * pair_entry(pair_index(i, j), pair_index(k, l));
}

void CouplingTensor::save(std::ostream& out) const {
    out << "syknqs-couplings v1\n";
    out << "L " << num_sites_ << "\n";
    out << "seed " << seed_ << "\n";
    const int P = num_pairs_;
    for (int p = 0; p < P; ++p) {
        for (int q = p; q < P; ++q) {
            const auto& z = pair_matrix_[p * P + q];
            out << p << " " << q << " " << hex_double(z.real()) << " " << hex_double(z.imag())
                << "\n";
        }
    }
}

void CouplingTensor::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save(out);
}

CouplingTensor CouplingTensor::load(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "syknqs-couplings" || version != "v1") {
        throw std::runtime_error("not a coupling record");
    }
    std::string key;
    int num_sites = 0;
    std::uint64_t seed = 0;
    in >> key >> num_sites;
    if (key != "L") throw std::runtime_error("malformed coupling record");
    in >> key >> seed;
    if (key != "seed") throw std::runtime_error("malformed coupling record");
    CouplingTensor tensor(num_sites, seed);
    const int P = tensor.num_pairs_;
    int p = 0, q = 0;
    std::string re, im;
    for (int row = 0; row < P; ++row) {
        for (int col = row; col < P; ++col) {
            if (!(in >> p >> q >> re >> im)) throw std::runtime_error("truncated coupling record");
            if (p != row || q != col) throw std::runtime_error("malformed coupling record");
            std::complex<double> z(parse_hex_double(re), parse_hex_double(im));
            tensor.pair_matrix_[p * P + q] = z;
            tensor.pair_matrix_[q * P + p] = std::conj(z);
        }
    }
    return tensor;
}

CouplingTensor CouplingTensor::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coupling record: " + path);
    return load(in);
}

}  // namespace syknqs
