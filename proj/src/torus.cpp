// SPDX-License-Identifier: MIT
#include "ricciforge/torus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "ricciforge/error.hpp"

namespace ricciforge {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

TorusGrid::TorusGrid(int dim_, int n_axis_) : dim(dim_), n_axis(n_axis_) {
  require(dim == 2 || dim == 3, "torus grid: dim must be 2 or 3");
  require(n_axis >= 8, "torus grid: N must be at least 8");
  require(is_power_of_two(n_axis), "torus grid: N must be a power of two");
  require(dim == 2 ? n_axis <= 128 : n_axis <= 32, "torus grid: N beyond desk-scale cap");
}

std::array<double, 3> TorusGrid::coords(std::size_t node) const {
  const auto idx = node_indices(node);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = spacing() * idx[a];
  return x;
}

std::array<int, 3> TorusGrid::node_indices(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(node % static_cast<std::size_t>(n_axis));
    node /= static_cast<std::size_t>(n_axis);
  }
  return idx;
}

std::size_t TorusGrid::node_at(const std::array<int, 3>& idx) const {
  std::size_t node = 0;
  for (int a = 0; a < dim; ++a) {
    int w = idx[a] % n_axis;
    if (w < 0) w += n_axis;
    node = node * static_cast<std::size_t>(n_axis) + static_cast<std::size_t>(w);
  }
  return node;
}

int sym2_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // offset of row i in the packed upper triangle
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::string component_labels(int n, int rank) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::string& s) {
    if (!first) os << ",";
    os << s;
    first = false;
  };
  if (rank == 0) {
    emit("s");
  } else if (rank == 1) {
    for (int i = 1; i <= n; ++i) emit(std::to_string(i));
  } else if (rank == 2) {
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) emit(std::to_string(i) + std::to_string(j));
  } else {
    fail("component_labels: unsupported rank");
  }
  return os.str();
}

double FieldStorage::sup_norm() const {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool FieldStorage::finite() const {
  for (const double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

FieldStorage& FieldStorage::operator+=(const FieldStorage& r) {
  require(grid == r.grid && comps == r.comps, "field add: shape mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += r.v[i];
  return *this;
}

FieldStorage& FieldStorage::operator-=(const FieldStorage& r) {
  require(grid == r.grid && comps == r.comps, "field sub: shape mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= r.v[i];
  return *this;
}

FieldStorage& FieldStorage::scale(double s) {
  for (double& x : v) x *= s;
  return *this;
}

Sym2Field Sym2Field::identity(const TorusGrid& g) {
  Sym2Field out(g);
  for (int i = 0; i < g.dim; ++i) {
    double* c = out.comp(sym2_index(g.dim, i, i));
    std::fill(c, c + g.nodes(), 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radix-2 FFT
// ---------------------------------------------------------------------------

namespace {

struct FftPlan {
  int n;
  std::vector<int> bit_reverse;
  std::vector<std::complex<double>> twiddle;  // e^{-2 pi i k / n}, k < n/2

  explicit FftPlan(int n_) : n(n_), bit_reverse(n_), twiddle(n_ / 2) {
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n; ++b)
        if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
      bit_reverse[i] = r;
    }
    for (int k = 0; k < n / 2; ++k) {
      const double ang = -2.0 * M_PI * k / n;
      twiddle[k] = {std::cos(ang), std::sin(ang)};
    }
  }

  // In-place forward transform of a contiguous line (conjugate for inverse).
  void forward(std::complex<double>* a) const {
    for (int i = 0; i < n; ++i) {
      const int r = bit_reverse[i];
      if (i < r) std::swap(a[i], a[r]);
    }
    for (int len = 2; len <= n; len <<= 1) {
      const int half = len >> 1;
      const int step = n / len;
      for (int start = 0; start < n; start += len) {
        for (int k = 0; k < half; ++k) {
          const std::complex<double> w = twiddle[static_cast<std::size_t>(k) * step];
          const std::complex<double> u = a[start + k];
          const std::complex<double> t = w * a[start + k + half];
          a[start + k] = u + t;
          a[start + k + half] = u - t;
        }
      }
    }
  }
};

const FftPlan& plan_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

/// Applies the 1-d transform along `axis` of an n-dim row-major complex array.
void transform_axis(const TorusGrid& grid, std::vector<std::complex<double>>& data, int axis,
                    bool inverse) {
  const int N = grid.n_axis;
  const FftPlan& plan = plan_for(N);
  std::size_t stride = 1;
  for (int a = grid.dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(N);
  const std::size_t block = stride * static_cast<std::size_t>(N);
  const std::size_t total = grid.nodes();
  std::vector<std::complex<double>> line(N);
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (int j = 0; j < N; ++j)
        line[j] = data[base + off + static_cast<std::size_t>(j) * stride];
      if (inverse)
        for (auto& z : line) z = std::conj(z);
      plan.forward(line.data());
      if (inverse)
        for (auto& z : line) z = std::conj(z) * (1.0 / N);
      for (int j = 0; j < N; ++j)
        data[base + off + static_cast<std::size_t>(j) * stride] = line[j];
    }
  }
}

}  // namespace

std::vector<std::complex<double>> fft_forward(const TorusGrid& grid, const double* comp) {
  std::vector<std::complex<double>> spec(grid.nodes());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = comp[i];
  for (int a = 0; a < grid.dim; ++a) transform_axis(grid, spec, a, false);
  return spec;
}

void fft_inverse(const TorusGrid& grid, std::vector<std::complex<double>> spectrum,
                 double* out_comp) {
  for (int a = 0; a < grid.dim; ++a) transform_axis(grid, spectrum, a, true);
  for (std::size_t i = 0; i < spectrum.size(); ++i) out_comp[i] = spectrum[i].real();
}

double tail_energy_fraction(const TorusGrid& grid, const double* comp) {
  const auto spec = fft_forward(grid, comp);
  const int N = grid.n_axis;
  const int cut = N / 3;
  double total = 0.0, tail = 0.0;
  for (std::size_t node = 0; node < spec.size(); ++node) {
    const auto idx = grid.node_indices(node);
    const double e = std::norm(spec[node]);
    total += e;
    for (int a = 0; a < grid.dim; ++a)
      if (std::abs(signed_freq(idx[a], N)) > cut) {
        tail += e;
        break;
      }
  }
  return total == 0.0 ? 0.0 : tail / total;
}

void spectral_derivative_comp(const TorusGrid& grid, const double* in, int axis, double* out,
                              bool check_tail) {
  require(axis >= 0 && axis < grid.dim, "spectral derivative: axis out of range");
  for (std::size_t i = 0; i < grid.nodes(); ++i)
    require(std::isfinite(in[i]), "spectral derivative: non-finite values");
  if (check_tail) {
    const double frac = tail_energy_fraction(grid, in);
    if (frac > 1e-8)
      std::fprintf(stderr,
                   "ricciforge: warning: field poorly resolved (tail energy fraction %.3e)\n",
                   frac);
  }
  auto spec = fft_forward(grid, in);
  const int N = grid.n_axis;
  for (std::size_t node = 0; node < spec.size(); ++node) {
    const auto idx = grid.node_indices(node);
    int k = signed_freq(idx[axis], N);
    if (idx[axis] == N / 2) k = 0;  // odd derivative of the Nyquist mode
    spec[node] *= std::complex<double>(0.0, static_cast<double>(k));
  }
  fft_inverse(grid, std::move(spec), out);
}

ScalarField spectral_derivative(const ScalarField& f, int axis, bool check_tail) {
  ScalarField out(f.grid);
  spectral_derivative_comp(f.grid, f.comp(0), axis, out.comp(0), check_tail);
  return out;
}

void dealias_comp(const TorusGrid& grid, double* comp) {
  auto spec = fft_forward(grid, comp);
  const int N = grid.n_axis;
  const int cut = N / 3;
  for (std::size_t node = 0; node < spec.size(); ++node) {
    const auto idx = grid.node_indices(node);
    for (int a = 0; a < grid.dim; ++a)
      if (std::abs(signed_freq(idx[a], N)) > cut) {
        spec[node] = 0.0;
        break;
      }
  }
  fft_inverse(grid, std::move(spec), comp);
}

void dealias(FieldStorage& f) {
  for (int c = 0; c < f.comps; ++c) dealias_comp(f.grid, f.comp(c));
}

std::vector<double> component_means(const FieldStorage& f) {
  std::vector<double> means(f.comps, 0.0);
  const std::size_t n = f.grid.nodes();
  for (int c = 0; c < f.comps; ++c) {
    double s = 0.0;
    const double* p = f.comp(c);
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    means[c] = s / static_cast<double>(n);
  }
  return means;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void write_field(const std::string& path, const FieldStorage& f, int rank, bool binary) {
  nlohmann::ordered_json header;
  header["schema"] = 1;
  header["n"] = f.grid.dim;
  header["N"] = f.grid.n_axis;
  header["rank"] = rank;
  header["components"] = component_labels(f.grid.dim, rank);
  header["encoding"] = binary ? "binary" : "csv";

  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    require(os.good(), "write_field: cannot open " + tmp);
    os << header.dump() << "\n";
    const std::size_t nodes = f.grid.nodes();
    if (binary) {
      std::vector<double> row(f.comps);
      for (std::size_t node = 0; node < nodes; ++node) {
        for (int c = 0; c < f.comps; ++c) row[c] = f.comp(c)[node];
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(sizeof(double) * row.size()));
      }
    } else {
      os.precision(17);
      for (std::size_t node = 0; node < nodes; ++node) {
        for (int c = 0; c < f.comps; ++c) {
          if (c) os << ",";
          os << f.comp(c)[node];
        }
        os << "\n";
      }
    }
    require(os.good(), "write_field: write failed for " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, "write_field: rename failed");
}

FieldStorage read_field(const std::string& path, int* rank_out) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "read_field: cannot open " + path);
  std::string header_line;
  std::getline(is, header_line);
  const auto header = nlohmann::json::parse(header_line);
  const int dim = header.at("n").get<int>();
  const int N = header.at("N").get<int>();
  const int rank = header.at("rank").get<int>();
  const std::string encoding = header.at("encoding").get<std::string>();
  if (rank_out) *rank_out = rank;

  const TorusGrid grid(dim, N);
  const int comps = rank == 0 ? 1 : rank == 1 ? dim : sym2_count(dim);
  FieldStorage f(grid, comps);
  const std::size_t nodes = grid.nodes();
  if (encoding == "binary") {
    std::vector<double> row(comps);
    for (std::size_t node = 0; node < nodes; ++node) {
      is.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * row.size()));
      require(is.good(), "read_field: truncated binary payload");
      for (int c = 0; c < comps; ++c) f.comp(c)[node] = row[c];
    }
  } else if (encoding == "csv") {
    std::string line;
    for (std::size_t node = 0; node < nodes; ++node) {
      require(static_cast<bool>(std::getline(is, line)), "read_field: truncated csv payload");
      std::istringstream ls(line);
      std::string cell;
      for (int c = 0; c < comps; ++c) {
        require(static_cast<bool>(std::getline(ls, cell, ',')), "read_field: short csv row");
        f.comp(c)[node] = std::stod(cell);
      }
    }
  } else {
    fail("read_field: unknown encoding " + encoding);
  }
  return f;
}

}  // namespace ricciforge
