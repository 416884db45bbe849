#include "facial/seqdyn.hpp"

#include <charconv>
#include <set>

#include "facial/error.hpp"

namespace facial {

namespace {

constexpr Index kMaxWindows = 1'000'000;

void check_window_count(Index alphabet_size, Index L) {
  if (alphabet_size < 1) throw ValidationError("alphabet must be non-empty");
  if (L < 0) throw ValidationError("window length must be non-negative");
  Index count = 1;
  for (Index l = 0; l < L; ++l) {
    if (count > kMaxWindows / alphabet_size) throw ValidationError("|X|^L exceeds the guardrail of 10^6");
    count *= alphabet_size;
  }
}

}  // namespace

Window::Window(Index alphabet_size, std::vector<Index> entries)
    : alphabet_size_(alphabet_size), entries_(std::move(entries)) {
  if (alphabet_size_ < 1) throw ValidationError("alphabet must be non-empty");
  for (Index x : entries_) {
    if (x < 0 || x >= alphabet_size_) {
      throw ValidationError("symbol " + std::to_string(x) + " is outside the alphabet [0.." +
                            std::to_string(alphabet_size_ - 1) + "]");
    }
  }
}

Window parse_window(std::string_view text, Index alphabet_size) {
  std::vector<Index> entries;
  if (text == "e") text = "";
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    Index v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw ValidationError("malformed window symbol '" + std::string(item) + "'");
    }
    entries.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Window(alphabet_size, std::move(entries));
}

std::string to_string(const Window& w) {
  if (w.entries().empty()) return "e";
  std::string out;
  for (Index x : w.entries()) {
    if (!out.empty()) out += ',';
    out += std::to_string(x);
  }
  return out;
}

std::vector<Window> all_windows(Index alphabet_size, Index L) {
  check_window_count(alphabet_size, L);
  std::vector<std::vector<Index>> cur{{}};
  for (Index l = 0; l < L; ++l) {
    std::vector<std::vector<Index>> next;
    next.reserve(cur.size() * static_cast<std::size_t>(alphabet_size));
    for (const auto& w : cur) {
      for (Index x = 0; x < alphabet_size; ++x) {
        next.push_back(w);
        next.back().push_back(x);
      }
    }
    cur = std::move(next);
  }
  std::vector<Window> out;
  out.reserve(cur.size());
  for (auto& w : cur) out.emplace_back(alphabet_size, std::move(w));
  return out;
}

Window delete_coord(Index i, const Window& w) {
  if (i < 1 || i > w.length()) {
    throw ValidationError("cannot delete coordinate " + std::to_string(i) + " of a window of length " +
                          std::to_string(w.length()));
  }
  std::vector<Index> out = w.entries();
  out.erase(out.begin() + (i - 1));
  return Window(w.alphabet_size(), std::move(out));
}

FaceReport verify_face_relations_windows(Index alphabet_size, Index L, Index index_bound) {
  if (index_bound < 0) throw ValidationError("index bound must be non-negative");
  if (L < index_bound + 2) throw ValidationError("face relations need L >= index_bound + 2");
  FaceReport report{alphabet_size, L, index_bound, 0, 0, {}};
  if (index_bound == 0) return report;
  for (const Window& w : all_windows(alphabet_size, L)) {
    for (Index j = 1; j <= index_bound; ++j) {
      for (Index i = 1; i <= j; ++i) {
        ++report.instances;
        Window lhs = delete_coord(j, delete_coord(i, w));
        Window rhs = delete_coord(i, delete_coord(j + 1, w));
        if (lhs != rhs) {
          ++report.failures;
          if (report.first_failures.size() < 10) report.first_failures.push_back({i, j, w, lhs, rhs});
        }
      }
    }
  }
  return report;
}

CylinderMeasure::CylinderMeasure(std::vector<Rational> eta, Index L) : eta_(std::move(eta)), L_(L) {
  if (eta_.empty()) throw ValidationError("eta needs at least one symbol");
  if (L_ < 1) throw ValidationError("cylinder length must be at least 1");
  check_window_count(static_cast<Index>(eta_.size()), L_);
  Rational total = 0;
  for (auto& q : eta_) {
    q.canonicalize();
    if (q < 0) throw ValidationError("eta masses must be non-negative");
    total += q;
  }
  if (total != 1) throw ValidationError("eta masses sum to " + to_string(total) + ", not 1");
}

Rational CylinderMeasure::probability(const Window& w) const {
  if (w.alphabet_size() != alphabet_size()) throw ValidationError("window alphabet does not match eta");
  Rational p = 1;
  for (Index x : w.entries()) p *= eta_[static_cast<std::size_t>(x)];
  return p;
}

CylinderMeasure parse_cylinder(std::string_view eta, Index L) {
  std::vector<Rational> masses;
  while (!eta.empty()) {
    const auto comma = eta.find(',');
    masses.push_back(parse_rational(eta.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    eta.remove_prefix(comma + 1);
  }
  return CylinderMeasure(std::move(masses), L);
}

WindowMeasure product_window_measure(const CylinderMeasure& cm) {
  WindowMeasure out;
  for (const Window& w : all_windows(cm.alphabet_size(), cm.length())) {
    Rational p = cm.probability(w);
    if (sgn(p) != 0) out.emplace(w, std::move(p));
  }
  return out;
}

namespace {

std::set<Window> event_set(const std::vector<Window>& event, Index alphabet_size, Index len) {
  std::set<Window> out;
  for (const Window& e : event) {
    if (e.alphabet_size() != alphabet_size || e.length() != len) {
      throw ValidationError("event window " + to_string(e) + " is not in X^" + std::to_string(len));
    }
    out.insert(e);
  }
  return out;
}

}  // namespace

InvarianceReport product_invariance_check(const CylinderMeasure& cm, Index i, const std::vector<Window>& event) {
  const Index L = cm.length();
  if (i < 1 || i > L) throw ValidationError("deletion index must lie in [1, L]");
  const auto E = event_set(event, cm.alphabet_size(), L - 1);
  InvarianceReport r;
  for (const Window& e : E) r.lhs += cm.probability(e);
  for (const Window& w : all_windows(cm.alphabet_size(), L)) {
    if (E.count(delete_coord(i, w))) r.rhs += cm.probability(w);
  }
  r.equal = r.lhs == r.rhs;
  return r;
}

InvarianceReport window_invariance_check(const WindowMeasure& rho, Index i, const std::vector<Window>& event) {
  if (rho.empty()) throw ValidationError("window measure has no atoms");
  const Index X = rho.begin()->first.alphabet_size();
  const Index L = rho.begin()->first.length();
  if (i < 1 || i > L) throw ValidationError("deletion index must lie in [1, L]");
  Rational total = 0;
  for (const auto& [w, p] : rho) {
    if (w.alphabet_size() != X || w.length() != L) throw ValidationError("window measure mixes shapes");
    if (p < 0) throw ValidationError("window measure has a negative atom");
    total += p;
  }
  if (total != 1) throw ValidationError("window measure sums to " + to_string(total));
  const auto E = event_set(event, X, L - 1);
  InvarianceReport r;
  for (const auto& [w, p] : rho) {
    if (E.count(delete_coord(L, w))) r.lhs += p;
    if (E.count(delete_coord(i, w))) r.rhs += p;
  }
  r.equal = r.lhs == r.rhs;
  return r;
}

NegativeControl find_negative_control(Index alphabet_size, Index L) {
  if (alphabet_size < 2 || L < 3) throw ValidationError("negative control search needs |X| >= 2 and L >= 3");
  const auto windows = all_windows(alphabet_size, L);
  const auto events = all_windows(alphabet_size, L - 1);
  for (Index a = 1; a <= L; ++a) {
    for (Index b = a + 1; b <= L; ++b) {
      std::vector<Window> support;
      for (const Window& w : windows) {
        if (w.entries()[a - 1] == w.entries()[b - 1]) support.push_back(w);
      }
      const Rational mass(1, static_cast<unsigned long>(support.size()));
      WindowMeasure rho;
      for (const Window& w : support) rho.emplace(w, mass);
      for (Index i = 2; i <= L; ++i) {
        for (const Window& e : events) {
          InvarianceReport r = window_invariance_check(rho, i, {e});
          if (!r.equal) {
            return {"uniform on {w : w_" + std::to_string(a) + " = w_" + std::to_string(b) + "}", rho, i,
                    {e}, r};
          }
        }
      }
    }
  }
  throw InvariantViolation("no correlated window measure violates invariance");
}

}  // namespace facial
