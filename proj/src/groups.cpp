#include "hyperpot/error.hpp"
#include "hyperpot/hypergroup.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hyperpot {

FiniteGroup::FiniteGroup(std::vector<std::vector<Index>> mult, std::string name)
    : mult_(std::move(mult)), name_(std::move(name)) {
  const std::size_t n = mult_.size();
  auto bad = [](const std::string& what) { throw Error(Errc::invalid_parameter, "invalid group table: " + what); };
  if (n == 0) bad("empty");
  for (const auto& row : mult_) {
    if (row.size() != n) bad("not square");
    std::vector<bool> seen(n, false);
    for (Index v : row) {
      if (v >= n) bad("entry out of range");
      if (seen[v]) bad("row is not a permutation");
      seen[v] = true;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      if (seen[mult_[r][c]]) bad("column is not a permutation");
      seen[mult_[r][c]] = true;
    }
  }
  bool found = false;
  for (Index e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = mult_[e][a] == a && mult_[a][e] == a;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) bad("no identity element");
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (mult_[mult_[a][b]][c] != mult_[a][mult_[b][c]]) bad("not associative");
  inverse_.resize(n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (mult_[a][b] == identity_) inverse_[a] = b;
}

std::vector<std::vector<Index>> FiniteGroup::conjugacy_classes() const {
  const std::size_t n = order();
  std::vector<int> owner(n, -1);
  std::vector<std::vector<Index>> classes;
  auto add_class = [&](Index seed) {
    std::vector<Index> members;
    for (Index g = 0; g < n; ++g) {
      const Index c = multiply(multiply(g, seed), inverse(g));
      if (owner[c] < 0) {
        owner[c] = int(classes.size());
        members.push_back(c);
      }
    }
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  };
  add_class(identity_);
  for (Index a = 0; a < n; ++a)
    if (owner[a] < 0) add_class(a);
  return classes;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_parameter, "cyclic group order must be positive");
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = Index((a + b) % n);
  return FiniteGroup(std::move(t), "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric(std::size_t k) {
  if (k == 0 || k > 5) throw Error(Errc::invalid_parameter, "symmetric group degree must be in 1..5");
  std::vector<std::vector<Index>> perms;
  std::vector<Index> p(k);
  std::iota(p.begin(), p.end(), Index{0});
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t n = perms.size();
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  std::vector<Index> composed(k);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // (a·b)(i) = a(b(i))
      for (std::size_t i = 0; i < k; ++i) composed[i] = perms[a][perms[b][i]];
      t[a][b] = Index(std::find(perms.begin(), perms.end(), composed) - perms.begin());
    }
  }
  return FiniteGroup(std::move(t), "S" + std::to_string(k));
}

FiniteGroup FiniteGroup::dihedral(std::size_t m) {
  if (m < 1) throw Error(Errc::invalid_parameter, "dihedral group needs m >= 1");
  // element r^i s^j encoded as i + m*j; s r = r^{-1} s
  const std::size_t n = 2 * m;
  std::vector<std::vector<Index>> t(n, std::vector<Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t i1 = a % m, j1 = a / m, i2 = b % m, j2 = b / m;
      const std::size_t i = j1 == 0 ? (i1 + i2) % m : (i1 + m - i2) % m;
      t[a][b] = Index(i + m * ((j1 + j2) % 2));
    }
  }
  return FiniteGroup(std::move(t), "D" + std::to_string(m));
}

FiniteGroup FiniteGroup::quaternion() {
  // units 1,i,j,k as 0..3; element = unit + 4*sign_bit
  static constexpr int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<Index>> t(8, std::vector<Index>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int ua = a % 4, ub = b % 4;
      const int s = (a / 4 + b / 4 + sign[ua][ub]) % 2;
      t[a][b] = Index(unit[ua][ub] + 4 * s);
    }
  return FiniteGroup(std::move(t), "Q8");
}

FiniteGroup FiniteGroup::by_name(const std::string& name) {
  if (name == "Q8") return quaternion();
  if (name.size() >= 2) {
    std::size_t order = 0;
    try {
      order = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      throw Error(Errc::invalid_parameter, "unknown group " + name);
    }
    switch (name[0]) {
      case 'Z':
      case 'C': return cyclic(order);
      case 'S': return symmetric(order);
      case 'D': return dihedral(order);
      default: break;
    }
  }
  throw Error(Errc::invalid_parameter, "unknown group " + name);
}

}  // namespace hyperpot
