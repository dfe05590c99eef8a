#include "gauduchon/frame_tensor.hpp"

#include <algorithm>

namespace gauduchon {

std::string to_string(SlotKind k) {
  switch (k) {
    case SlotKind::HolUp: return "hol-up";
    case SlotKind::HolDown: return "hol-down";
    case SlotKind::AntiUp: return "anti-up";
    case SlotKind::AntiDown: return "anti-down";
  }
  return "?";
}

namespace {

void check_slot(int rank, int slot) {
  if (slot < 0 || slot >= rank) throw std::out_of_range("slot index " + std::to_string(slot) + " out of range");
}

}  // namespace

template <class S>
FrameTensor<S> contract(const FrameTensor<S>& t, int slot_a, int slot_b) {
  check_slot(t.rank(), slot_a);
  check_slot(t.rank(), slot_b);
  if (slot_a == slot_b) throw std::invalid_argument("cannot contract a slot with itself");
  const SlotKind ka = t.slots()[static_cast<std::size_t>(slot_a)];
  const SlotKind kb = t.slots()[static_cast<std::size_t>(slot_b)];
  if (!contractible(ka, kb))
    throw std::invalid_argument("incompatible slot kinds for contraction: " + to_string(ka) + " with " + to_string(kb));

  std::vector<SlotKind> rest;
  for (int s = 0; s < t.rank(); ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.slots()[static_cast<std::size_t>(s)]);
  FrameTensor<S> out(t.dim(), rest);

  std::vector<int> full(static_cast<std::size_t>(t.rank()));
  for (std::size_t off = 0; off < out.data().size(); ++off) {
    const std::vector<int> idx = out.unflatten(off);
    for (int s = 0, r = 0; s < t.rank(); ++s)
      if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(r++)];
    S acc = ScalarTraits<S>::zero();
    for (int i = 0; i < t.dim(); ++i) {
      full[static_cast<std::size_t>(slot_a)] = i;
      full[static_cast<std::size_t>(slot_b)] = i;
      acc += t.at(full);
    }
    out.data()[off] = std::move(acc);
  }
  return out;
}

template <class S>
FrameTensor<S> conjugate(const FrameTensor<S>& t) {
  std::vector<SlotKind> slots;
  slots.reserve(t.slots().size());
  for (SlotKind k : t.slots()) slots.push_back(flip_bar(k));
  std::vector<S> data;
  data.reserve(t.data().size());
  for (const S& x : t.data()) data.push_back(conj_of(x));
  return FrameTensor<S>(t.dim(), std::move(slots), std::move(data));
}

template <class S>
FrameTensor<S> change_frame(const FrameTensor<S>& t, const Matrix<S>& u) {
  if (u.rows() != t.dim() || u.cols() != t.dim()) throw std::invalid_argument("frame change matrix has wrong size");
  if (!is_unitary(u)) throw std::invalid_argument("frame change matrix is not unitary");

  // Per-kind transformation matrices m with t'_{..i..} = sum_j m(j, i) t_{..j..}.
  const Matrix<S> uc = u.conjugate();
  FrameTensor<S> cur = t;
  const int n = t.dim();
  for (int slot = 0; slot < t.rank(); ++slot) {
    const SlotKind k = t.slots()[static_cast<std::size_t>(slot)];
    const Matrix<S>& m = (k == SlotKind::HolDown || k == SlotKind::AntiUp) ? u : uc;
    FrameTensor<S> next(n, t.slots());
    for (std::size_t off = 0; off < next.data().size(); ++off) {
      std::vector<int> idx = next.unflatten(off);
      const int i = idx[static_cast<std::size_t>(slot)];
      S acc = ScalarTraits<S>::zero();
      for (int j = 0; j < n; ++j) {
        if (exactly_zero(m(j, i))) continue;
        idx[static_cast<std::size_t>(slot)] = j;
        acc += m(j, i) * cur.at(idx);
      }
      next.data()[off] = std::move(acc);
    }
    cur = std::move(next);
  }
  return cur;
}

template <class S>
FrameTensor<S> outer(const FrameTensor<S>& a, const FrameTensor<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("outer product of tensors over different frames");
  std::vector<SlotKind> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  std::vector<S> data;
  data.reserve(a.data().size() * b.data().size());
  for (const S& x : a.data())
    for (const S& y : b.data()) data.push_back(x * y);
  return FrameTensor<S>(a.dim(), std::move(slots), std::move(data));
}

template <class S>
FrameTensor<S> swap_slots(const FrameTensor<S>& t, int slot_a, int slot_b) {
  check_slot(t.rank(), slot_a);
  check_slot(t.rank(), slot_b);
  if (t.slots()[static_cast<std::size_t>(slot_a)] != t.slots()[static_cast<std::size_t>(slot_b)])
    throw std::invalid_argument("can only swap slots of equal kind");
  FrameTensor<S> out(t.dim(), t.slots());
  for (std::size_t off = 0; off < out.data().size(); ++off) {
    std::vector<int> idx = out.unflatten(off);
    std::swap(idx[static_cast<std::size_t>(slot_a)], idx[static_cast<std::size_t>(slot_b)]);
    out.data()[off] = t.at(idx);
  }
  return out;
}

template <class S>
FrameTensor<S> antisymmetrize(const FrameTensor<S>& t, int slot_a, int slot_b) {
  FrameTensor<S> out = t - swap_slots(t, slot_a, slot_b);
  out *= ScalarTraits<S>::lift(Rational(1, 2));
  return out;
}

template <class S>
double antisymmetry_defect(const FrameTensor<S>& t, int slot_a, int slot_b) {
  return (t + swap_slots(t, slot_a, slot_b)).max_abs();
}

#define GAUDUCHON_INSTANTIATE_TENSOR(S)                                            \
  template class FrameTensor<S>;                                                   \
  template FrameTensor<S> contract(const FrameTensor<S>&, int, int);               \
  template FrameTensor<S> conjugate(const FrameTensor<S>&);                        \
  template FrameTensor<S> change_frame(const FrameTensor<S>&, const Matrix<S>&);   \
  template FrameTensor<S> outer(const FrameTensor<S>&, const FrameTensor<S>&);     \
  template FrameTensor<S> swap_slots(const FrameTensor<S>&, int, int);             \
  template FrameTensor<S> antisymmetrize(const FrameTensor<S>&, int, int);         \
  template double antisymmetry_defect(const FrameTensor<S>&, int, int);

GAUDUCHON_INSTANTIATE_TENSOR(GaussRational)
GAUDUCHON_INSTANTIATE_TENSOR(Complex)

#undef GAUDUCHON_INSTANTIATE_TENSOR

}  // namespace gauduchon
