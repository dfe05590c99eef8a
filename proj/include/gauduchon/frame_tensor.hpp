#pragma once

// Dense tensors over a unitary (1,0)-frame {e_i} and its conjugate {e_ibar}.
//
// Every slot carries its kind: holomorphic or antiholomorphic, upper or lower.
// Contractions pair an upper slot with a lower slot of the same bar type, or
// two slots of opposite bar type and equal variance through the unitary-frame
// metric g(e_i, e_jbar) = delta_ij. Any other pairing is rejected.
//
// Hermitian pairing convention: <X, Y> is the complex-bilinear extension of g,
// so <X, e_kbar> extracts the e_k coefficient of X. The sesquilinear inner
// product h(X, Y) = <X, conj(Y)> is linear in the first slot and antilinear in
// the second.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gauduchon/matrix.hpp"
#include "gauduchon/numeric.hpp"

namespace gauduchon {

enum class SlotKind : unsigned char { HolUp, HolDown, AntiUp, AntiDown };

constexpr bool is_upper(SlotKind k) { return k == SlotKind::HolUp || k == SlotKind::AntiUp; }
constexpr bool is_anti(SlotKind k) { return k == SlotKind::AntiUp || k == SlotKind::AntiDown; }
constexpr SlotKind flip_bar(SlotKind k) {
  switch (k) {
    case SlotKind::HolUp: return SlotKind::AntiUp;
    case SlotKind::HolDown: return SlotKind::AntiDown;
    case SlotKind::AntiUp: return SlotKind::HolUp;
    case SlotKind::AntiDown: return SlotKind::HolDown;
  }
  return k;
}
std::string to_string(SlotKind k);

/// Whether two slots may be summed against each other.
constexpr bool contractible(SlotKind a, SlotKind b) {
  if (is_anti(a) == is_anti(b)) return is_upper(a) != is_upper(b);
  return is_upper(a) == is_upper(b);
}

template <class S>
class FrameTensor {
 public:
  FrameTensor(int n, std::vector<SlotKind> slots) : n_(n), slots_(std::move(slots)) {
    if (n <= 0) throw std::invalid_argument("frame dimension must be positive");
    data_.assign(volume(), ScalarTraits<S>::zero());
  }
  FrameTensor(int n, std::vector<SlotKind> slots, std::vector<S> data) : n_(n), slots_(std::move(slots)), data_(std::move(data)) {
    if (n <= 0) throw std::invalid_argument("frame dimension must be positive");
    if (data_.size() != volume()) throw std::invalid_argument("frame tensor data length must equal n^rank");
  }

  static FrameTensor scalar(int n, S value) { return FrameTensor(n, {}, {std::move(value)}); }

  /// delta^i_j with slots (HolUp, HolDown).
  static FrameTensor identity(int n) {
    FrameTensor t(n, {SlotKind::HolUp, SlotKind::HolDown});
    for (int i = 0; i < n; ++i) t.at({i, i}) = ScalarTraits<S>::one();
    return t;
  }

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<SlotKind>& slots() const { return slots_; }
  std::span<const S> data() const { return data_; }
  std::span<S> data() { return data_; }

  std::size_t offset(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("frame tensor index has wrong rank");
    std::size_t off = 0;
    for (int i : idx) {
      if (i < 0 || i >= n_) throw std::out_of_range("frame tensor index out of range");
      off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    }
    return off;
  }
  S& at(std::span<const int> idx) { return data_[offset(idx)]; }
  const S& at(std::span<const int> idx) const { return data_[offset(idx)]; }
  S& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const S& at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }

  /// Scalar value of a rank-0 tensor.
  const S& value() const {
    if (rank() != 0) throw std::logic_error("value() on a tensor of positive rank");
    return data_[0];
  }

  /// Multi-index of a flat offset.
  std::vector<int> unflatten(std::size_t off) const {
    std::vector<int> idx(slots_.size());
    for (int s = rank() - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(off % static_cast<std::size_t>(n_));
      off /= static_cast<std::size_t>(n_);
    }
    return idx;
  }

  FrameTensor& operator+=(const FrameTensor& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  FrameTensor& operator-=(const FrameTensor& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  FrameTensor& operator*=(const S& k) {
    for (auto& x : data_) x *= k;
    return *this;
  }
  friend FrameTensor operator+(FrameTensor a, const FrameTensor& b) { return a += b; }
  friend FrameTensor operator-(FrameTensor a, const FrameTensor& b) { return a -= b; }
  friend FrameTensor operator*(FrameTensor a, const S& k) { return a *= k; }
  friend FrameTensor operator*(const S& k, FrameTensor a) { return a *= k; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }
  bool is_exactly_zero() const {
    for (const auto& x : data_)
      if (!exactly_zero(x)) return false;
    return true;
  }

 private:
  std::size_t volume() const {
    std::size_t v = 1;
    for (std::size_t k = 0; k < slots_.size(); ++k) v *= static_cast<std::size_t>(n_);
    return v;
  }
  void check_same_shape(const FrameTensor& o) const {
    if (n_ != o.n_ || slots_ != o.slots_) throw std::invalid_argument("frame tensor shape mismatch");
  }

  int n_;
  std::vector<SlotKind> slots_;
  std::vector<S> data_;
};

/// Sums slot_a against slot_b; the result keeps the remaining slots in order.
template <class S>
FrameTensor<S> contract(const FrameTensor<S>& t, int slot_a, int slot_b);

/// Flips every slot's bar type and conjugates every component.
template <class S>
FrameTensor<S> conjugate(const FrameTensor<S>& t);

/// Components in the frame e'_i = sum_j u(j, i) e_j.
template <class S>
FrameTensor<S> change_frame(const FrameTensor<S>& t, const Matrix<S>& u);

/// Tensor product; slots of `a` first.
template <class S>
FrameTensor<S> outer(const FrameTensor<S>& a, const FrameTensor<S>& b);

/// Exchanges two slots of equal kind.
template <class S>
FrameTensor<S> swap_slots(const FrameTensor<S>& t, int slot_a, int slot_b);

/// (t - swap_slots(t, a, b)) / 2.
template <class S>
FrameTensor<S> antisymmetrize(const FrameTensor<S>& t, int slot_a, int slot_b);

/// Largest |t + swap_slots(t, a, b)|; zero when t is antisymmetric in (a, b).
template <class S>
double antisymmetry_defect(const FrameTensor<S>& t, int slot_a, int slot_b);

extern template class FrameTensor<GaussRational>;
extern template class FrameTensor<Complex>;

}  // namespace gauduchon
