#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "facial/error.hpp"
#include "facial/measures.hpp"
#include "facial/ordermap.hpp"
#include "facial/rewrite.hpp"
#include "facial/search.hpp"
#include "facial/seqdyn.hpp"
#include "facial/setmodel.hpp"
#include "facial/thompson.hpp"
#include "facial/tower.hpp"

namespace facial::cli {

namespace {

// ---- output records ------------------------------------------------------

struct Field {
  enum class Kind { text, integer, boolean, real };
  std::string key;
  std::string value;
  Kind kind = Kind::text;
};

class Row {
 public:
  Row& s(std::string key, std::string value) { return add(std::move(key), std::move(value), Field::Kind::text); }
  Row& i(std::string key, long long value) {
    return add(std::move(key), std::to_string(value), Field::Kind::integer);
  }
  Row& b(std::string key, bool value) { return add(std::move(key), value ? "true" : "false", Field::Kind::boolean); }
  Row& d(std::string key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return add(std::move(key), buf, Field::Kind::real);
  }
  Row& q(std::string key, const Rational& value) { return s(std::move(key), to_string(value)); }

  const std::vector<Field>& fields() const { return fields_; }

 private:
  Row& add(std::string key, std::string value, Field::Kind kind) {
    fields_.push_back({std::move(key), std::move(value), kind});
    return *this;
  }
  std::vector<Field> fields_;
};

struct Output {
  std::vector<Row> rows;
  // Human-readable rendering; when empty, rows print as key=value lines.
  std::vector<std::string> text;
  // Reported after printing: a refuted invariant.
  std::optional<std::string> violation;
};

enum class Format { text, tsv, json_lines };

void emit(const Output& o, Format format, std::ostream& out) {
  switch (format) {
    case Format::text:
      if (!o.text.empty()) {
        for (const auto& line : o.text) out << line << '\n';
        return;
      }
      for (const Row& r : o.rows) {
        bool first = true;
        for (const Field& f : r.fields()) {
          out << (first ? "" : " ") << f.key << '=' << f.value;
          first = false;
        }
        out << '\n';
      }
      return;
    case Format::tsv: {
      std::vector<std::string> header;
      for (const Row& r : o.rows) {
        std::vector<std::string> keys;
        for (const Field& f : r.fields()) keys.push_back(f.key);
        if (keys != header) {
          header = keys;
          for (std::size_t c = 0; c < keys.size(); ++c) out << (c ? "\t" : "") << keys[c];
          out << '\n';
        }
        for (std::size_t c = 0; c < r.fields().size(); ++c) out << (c ? "\t" : "") << r.fields()[c].value;
        out << '\n';
      }
      return;
    }
    case Format::json_lines:
      for (const Row& r : o.rows) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const Field& f : r.fields()) {
          switch (f.kind) {
            case Field::Kind::integer: j[f.key] = std::stoll(f.value); break;
            case Field::Kind::boolean: j[f.key] = f.value == "true"; break;
            case Field::Kind::real: j[f.key] = std::stod(f.value); break;
            case Field::Kind::text: j[f.key] = f.value; break;
          }
        }
        out << j.dump() << '\n';
      }
      return;
  }
}

// ---- small parsers --------------------------------------------------------

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Flat reduction is quadratic in the length, so the tool refuses long words.
constexpr std::size_t kMaxCliWord = 64;

Word cli_word(const std::string& text) {
  Word w = parse_word(text);
  if (w.size() > kMaxCliWord) {
    throw ValidationError("words are limited to " + std::to_string(kMaxCliWord) + " letters");
  }
  return w;
}

// Either a normal form "g1^2.g3^1" or a plain letter word "1 1 3".
FPlusNormalForm cli_fplus(const std::string& text) {
  if (text.find('g') != std::string::npos) return parse_fplus(text);
  return fplus_normalize(cli_word(text));
}

std::vector<CanonSet> parse_family(const std::string& text) {
  std::vector<CanonSet> out;
  for (const auto& part : split(text, ';')) out.push_back(parse_set(part));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ReductionStrategy parse_strategy(const std::string& name, std::uint64_t seed) {
  if (name == "leftmost") return ReductionStrategy::leftmost();
  if (name == "rightmost") return ReductionStrategy::rightmost();
  if (name == "random") return ReductionStrategy::randomized(seed);
  throw ValidationError("unknown strategy '" + name + "' (leftmost, rightmost, random)");
}

std::string measure_string(const std::vector<std::int64_t>& h) {
  std::string out = "(";
  for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "," : "") + std::to_string(h[i]);
  return out + ")";
}

void add_dist_lines(Output& o, const Dist& mu) {
  std::istringstream in(serialize(mu));
  std::string line;
  while (std::getline(in, line)) o.text.push_back(line);
}

// ---- subcommands ----------------------------------------------------------

struct NormalizeOpts {
  std::string system = "flat";
  std::string strategy = "leftmost";
  std::uint64_t seed = 0;
  bool trace = false;
  bool measure = false;
  std::optional<Index> max_index;
  std::optional<Index> sn;
  std::vector<std::string> word;
};

Output cmd_normalize(const NormalizeOpts& o) {
  const Word w = cli_word(join(o.word));
  const RuleSystem system = parse_rule_system(o.system);
  const ReductionStrategy strategy = parse_strategy(o.strategy, o.seed);
  if (o.max_index && system != RuleSystem::descending) {
    throw ValidationError("--max-index applies to the descending system only");
  }
  const Reduction r = system == RuleSystem::descending ? reduce_descending(w, o.max_index, strategy)
                                                       : reduce(system, w, strategy);
  Output out;
  Row row;
  row.s("input", to_string(w)).s("system", to_string(system)).s("normal_form", to_string(r.normal_form));
  row.i("steps", static_cast<long long>(r.trace.size()));
  out.text.push_back(to_string(r.normal_form));
  if (o.measure) {
    const std::string h = measure_string(termination_measure(w));
    row.s("measure", h);
    out.text.push_back("measure=" + h);
  }
  if (o.sn) {
    const Word nf = sn_membership_normal_form(w, *o.sn);
    row.s("sn_normal_form", to_string(nf));
    out.text.push_back("sn_normal_form=" + to_string(nf));
  }
  if (o.trace) {
    std::istringstream log(r.trace.to_log());
    std::string line;
    while (std::getline(log, line)) out.text.push_back(line);
    row.s("trace", r.trace.to_log());
  }
  out.rows.push_back(row);
  return out;
}

struct MulOpts {
  std::string a;
  std::string b;
  bool equal = false;
};

Output cmd_mul(const MulOpts& o) {
  const Word a = cli_word(o.a);
  const Word b = cli_word(o.b);
  Output out;
  if (o.equal) {
    const bool eq = words_equal(a, b);
    out.rows.push_back(Row().s("a", to_string(a)).s("b", to_string(b)).b("equal", eq));
    out.text.push_back(eq ? "equal" : "different");
    return out;
  }
  const Word p = multiply(a, b);
  out.rows.push_back(Row().s("a", to_string(a)).s("b", to_string(b)).s("product", to_string(p)));
  out.text.push_back(to_string(p));
  return out;
}

struct ConfluenceOpts {
  std::string system = "flat";
  Index max_index = 4;
  bool list = false;
};

Word path_end(const Word& peak, const RewriteTrace& t) { return t.empty() ? peak : t.steps().back().after; }

Output cmd_confluence(const ConfluenceOpts& o) {
  const RuleSystem system = parse_rule_system(o.system);
  const auto pairs = critical_pairs(system, o.max_index);
  Output out;
  std::size_t joined = 0;
  for (const auto& p : pairs) {
    joined += p.joined;
    if (o.list) {
      out.rows.push_back(Row()
                             .s("peak", to_string(p.peak))
                             .s("left", to_string(path_end(p.peak, p.left_path)))
                             .s("right", to_string(path_end(p.peak, p.right_path)))
                             .b("joined", p.joined));
    }
  }
  out.rows.push_back(Row()
                         .s("system", to_string(system))
                         .i("max_index", o.max_index)
                         .i("peaks", static_cast<long long>(pairs.size()))
                         .i("joined", static_cast<long long>(joined))
                         .b("all_joined", joined == pairs.size()));
  if (joined != pairs.size()) out.violation = "critical pairs fail to join";
  return out;
}

struct CancelOpts {
  std::string s;
  std::string t;
  std::string x;
};

Output cmd_cancel(const CancelOpts& o) {
  const Word s = cli_word(o.s);
  const Word t = cli_word(o.t);
  const Word x = cli_word(o.x);
  const bool holds = right_cancel_check(s, t, x);
  Output out;
  out.rows.push_back(Row()
                         .s("s", to_string(s))
                         .s("t", to_string(t))
                         .s("x", to_string(x))
                         .s("sx", to_string(multiply(s, x)))
                         .s("tx", to_string(multiply(t, x)))
                         .b("s_equals_t", words_equal(s, t))
                         .b("holds", holds));
  if (!holds) out.violation = "right cancellation fails";
  return out;
}

struct SetmodelOpts {
  std::string op = "sigma";
  Index i = 1;
  std::string set = "{}";
  std::string word = "e";
  Index n = 3;
};

Output cmd_setmodel(const SetmodelOpts& o) {
  Output out;
  if (o.op == "sigma" || o.op == "alpha") {
    const CanonSet e = parse_set(o.set);
    const CanonSet r = o.op == "sigma" ? sigma(o.i, e) : alpha(o.i, e);
    out.rows.push_back(Row().s("op", o.op).i("i", o.i).s("set", to_string(e)).s("result", to_string(r)));
    out.text.push_back(to_string(r));
  } else if (o.op == "to-set") {
    const CanonSet r = word_to_set(parse_word(o.word));
    out.rows.push_back(Row().s("word", o.word).s("set", to_string(r)));
    out.text.push_back(to_string(r));
  } else if (o.op == "to-word") {
    const Word w = set_to_word(parse_set(o.set));
    out.rows.push_back(Row().s("set", o.set).s("word", to_string(w)));
    out.text.push_back(to_string(w));
  } else if (o.op == "subsets") {
    for (const CanonSet& e : all_subsets(o.n)) {
      out.rows.push_back(Row().s("set", to_string(e)).b("pin_headed", is_pin_headed(e)));
    }
  } else {
    throw ValidationError("unknown setmodel op '" + o.op + "' (sigma, alpha, to-set, to-word, subsets)");
  }
  return out;
}

struct PinOpts {
  std::optional<std::string> to_fin;
  std::optional<std::string> to_pin;
};

Output cmd_pin(const PinOpts& o) {
  if (o.to_fin.has_value() == o.to_pin.has_value()) throw ValidationError("give exactly one of --to-fin, --to-pin");
  Output out;
  if (o.to_fin) {
    const CanonSet e = parse_set(*o.to_fin);
    const CanonSet r = pin_to_fin(PinSet(e));
    out.rows.push_back(Row().s("pin", to_string(e)).s("fin", to_string(r)));
    out.text.push_back(to_string(r));
  } else {
    const CanonSet f = parse_set(*o.to_pin);
    const PinSet r = fin_to_pin(f);
    out.rows.push_back(Row().s("fin", to_string(f)).s("pin", to_string(r.set())));
    out.text.push_back(to_string(r.set()));
  }
  return out;
}

struct OrdermapOpts {
  std::string op = "classify";
  std::string map = "identity";
  std::string map2 = "identity";
  Index i = 1;
  Index n = 1;
  std::string word = "e";
  Index modulus = 3;
  Index horizon = 30;
};

Output cmd_ordermap(const OrdermapOpts& o) {
  Output out;
  auto single = [&](const std::string& key, const std::string& value) {
    out.rows.push_back(Row().s("op", o.op).s(key, value));
    out.text.push_back(value);
  };
  if (o.op == "apply") {
    const OrderMap f = parse_order_map(o.map);
    out.rows.push_back(Row().s("map", to_string(f)).i("n", o.n).i("value", f(o.n)));
    out.text.push_back(std::to_string(f(o.n)));
  } else if (o.op == "compose") {
    single("result", to_string(compose(parse_order_map(o.map), parse_order_map(o.map2))));
  } else if (o.op == "face") {
    single("result", to_string(face_map(o.i)));
  } else if (o.op == "degeneracy") {
    single("result", to_string(degeneracy_map(o.i)));
  } else if (o.op == "pseudo-inverse") {
    single("result", to_string(pseudo_inverse(parse_order_map(o.map))));
  } else if (o.op == "represent") {
    single("result", to_string(represent_S(parse_word(o.word))));
  } else if (o.op == "embed-sop") {
    single("result", to_string(embed_Sop(parse_word(o.word))));
  } else if (o.op == "classify") {
    const OrderMap f = parse_order_map(o.map);
    const Classification c = classify(f);
    out.rows.push_back(Row()
                           .s("map", to_string(f))
                           .b("injective", c.injective)
                           .b("surjective", c.surjective)
                           .i("offset", c.offset));
  } else if (o.op == "waltz") {
    const WaltzReport r = waltz_congruence_check(o.modulus, o.horizon);
    out.rows.push_back(Row()
                           .i("modulus", r.modulus)
                           .i("horizon", r.horizon)
                           .i("even_preimage_size", static_cast<long long>(r.even_preimage.size()))
                           .b("preimage_is_multiples_of_three", r.preimage_is_multiples_of_three));
    for (const auto& d : r.residues) {
      out.rows.push_back(Row()
                             .i("residue", d.residue)
                             .d("density", d.density)
                             .d("shifted_density", d.shifted_density)
                             .d("waltz_preimage_density", d.waltz_preimage_density));
    }
  } else if (o.op == "doubling") {
    out.rows.push_back(Row()
                           .i("n", o.n)
                           .i("double", doubling_map(o.n))
                           .i("double_plus_one", doubling_plus_one_map(o.n))
                           .i("horizon", o.horizon)
                           .b("images_disjoint", doubling_images_disjoint(o.horizon)));
  } else {
    throw ValidationError("unknown ordermap op '" + o.op +
                          "' (apply, compose, face, degeneracy, pseudo-inverse, represent, embed-sop, "
                          "classify, waltz, doubling)");
  }
  return out;
}

struct EzOpts {
  Index max_index = 8;
  bool list = false;
};

Output cmd_ez(const EzOpts& o) {
  const auto rel = verify_ez_relations(o.max_index);
  Output out;
  std::map<int, std::pair<long long, long long>> per_family;
  long long failures = 0;
  for (const auto& r : rel) {
    auto& [n, bad] = per_family[r.family];
    ++n;
    bad += !r.holds;
    failures += !r.holds;
    if (o.list || !r.holds) {
      out.rows.push_back(
          Row().i("family", r.family).i("i", r.i).i("j", r.j).s("lhs", r.lhs).s("rhs", r.rhs).b("holds", r.holds));
    }
  }
  for (const auto& [family, counts] : per_family) {
    out.rows.push_back(Row().i("family", family).i("instances", counts.first).i("failures", counts.second));
  }
  out.rows.push_back(Row()
                         .i("max_index", o.max_index)
                         .i("instances", static_cast<long long>(rel.size()))
                         .i("failures", failures));
  if (failures) out.violation = "simplicial identities fail";
  return out;
}

struct FactorOpts {
  std::string map = "identity";
  std::string kind = "end-tr";
};

Output cmd_factor(const FactorOpts& o) {
  const OrderMap f = parse_order_map(o.map);
  Output out;
  if (o.kind == "end-tr") {
    const auto [a, b] = factor_end_tr(f);
    out.rows.push_back(Row().s("map", to_string(f)).s("S_word", to_string(a)).s("Sop_word", to_string(b)));
  } else if (o.kind == "descending") {
    const Word w = descending_factorization(f);
    out.rows.push_back(Row().s("map", to_string(f)).s("word", to_string(w)));
    out.text.push_back(to_string(w));
  } else if (o.kind == "sop") {
    const Word w = sop_factorization(f);
    out.rows.push_back(Row().s("map", to_string(f)).s("word", to_string(w)));
    out.text.push_back(to_string(w));
  } else {
    throw ValidationError("unknown factor kind '" + o.kind + "' (end-tr, descending, sop)");
  }
  return out;
}

struct FplusOpts {
  std::string op = "normalize";
  std::vector<std::string> words;
};

Output cmd_fplus(const FplusOpts& o) {
  Output out;
  if (o.op == "normalize") {
    const FPlusNormalForm g = cli_fplus(join(o.words));
    out.rows.push_back(Row()
                           .s("normal_form", to_string(g))
                           .s("word", to_string(g.to_word()))
                           .s("quotient", to_string(quotient_to_S(g))));
    out.text.push_back(to_string(g));
  } else if (o.op == "multiply") {
    if (o.words.size() != 2) throw ValidationError("fplus multiply takes two g-words");
    const FPlusNormalForm a = cli_fplus(o.words[0]);
    const FPlusNormalForm b = cli_fplus(o.words[1]);
    const FPlusNormalForm p = fplus_multiply(a, b);
    out.rows.push_back(Row().s("a", to_string(a)).s("b", to_string(b)).s("product", to_string(p)));
    out.text.push_back(to_string(p));
  } else {
    throw ValidationError("unknown fplus op '" + o.op + "' (normalize, multiply)");
  }
  return out;
}

struct EmbedOpts {
  std::vector<std::string> words;
  std::optional<std::string> action;
};

Output cmd_embed(const EmbedOpts& o) {
  Output out;
  if (o.action) {
    const AbelianVector t = parse_abelian(*o.action);
    const Word s = cli_word(join(o.words));
    const AbelianVector r = right_action(t, s);
    out.rows.push_back(Row().s("t", to_string(t)).s("s", to_string(s)).s("result", to_string(r)));
    out.text.push_back(to_string(r));
    return out;
  }
  if (o.words.size() == 2) {
    const FPlusNormalForm a = cli_fplus(o.words[0]);
    const FPlusNormalForm b = cli_fplus(o.words[1]);
    const SemidirectElem lhs = embed_fplus(fplus_multiply(a, b));
    const SemidirectElem rhs = semidirect_mul(embed_fplus(a), embed_fplus(b));
    out.rows.push_back(Row()
                           .s("a", to_string(a))
                           .s("b", to_string(b))
                           .s("embed_ab", to_string(lhs))
                           .s("embed_a_embed_b", to_string(rhs))
                           .b("homomorphic", lhs == rhs));
    if (!(lhs == rhs)) out.violation = "embedding is not multiplicative";
    return out;
  }
  const FPlusNormalForm g = cli_fplus(join(o.words));
  const SemidirectElem e = embed_fplus(g);
  out.rows.push_back(Row().s("g", to_string(g)).s("embedding", to_string(e)));
  out.text.push_back(to_string(e));
  return out;
}

struct WalkGapOpts {
  std::string nu = "uniform:1..2";
  Index k = 2;
  bool dump = false;
  std::optional<std::string> partial_product;
};

Output cmd_walk_gap(const WalkGapOpts& o) {
  Output out;
  if (o.partial_product) {
    std::vector<BaseStep> steps;
    for (const auto& law : split(*o.partial_product, ';')) steps.push_back(parse_base_step(law));
    const Dist d = partial_product_law(steps, [](Index a, Index b) { return a * b; });
    add_dist_lines(out, d);
    for (const auto& [e, m] : d.atoms()) out.rows.push_back(Row().s("tuple", to_string(e)).q("mass", m));
    return out;
  }
  const BaseStep nu = parse_base_step(o.nu);
  const NoRandomWalkReport r = no_random_walk_check(nu, o.k);
  out.rows.push_back(Row()
                         .s("nu", to_string(nu))
                         .i("k", r.k)
                         .i("M", r.M)
                         .q("tv", r.tv_value)
                         .d("tv_float", r.tv_value.get_d())
                         .q("nu_k_A", r.nu_k_A)
                         .q("nu_k1_B", r.nu_k1_B)
                         .q("independence_bound", r.independence_bound)
                         .q("event_gap", r.event_gap)
                         .b("chain_holds", r.chain_holds)
                         .b("exceeds_quarter", r.passes));
  if (o.dump) {
    out.text.push_back("# law of the walk, k=" + std::to_string(o.k));
    add_dist_lines(out, walk_measure(nu, o.k));
  }
  if (!r.passes || !r.chain_holds) out.violation = "the deletion defect of the walk is not above 1/4";
  if (!out.text.empty()) {
    std::ostringstream head;
    for (const Field& f : out.rows.front().fields()) head << (head.tellp() ? " " : "") << f.key << '=' << f.value;
    out.text.insert(out.text.begin(), head.str());
  }
  return out;
}

struct SearchOpts {
  Index N = 4;
  Index k = 2;
  std::optional<std::string> family;
  bool dump_mu = false;
  std::optional<std::string> check_mu;
  std::size_t iterations = 20000;
  std::uint64_t seed = 1;
  double step = 0.02;
};

Output search_output(const SearchResult& r, const Universe& u, bool dump) {
  Output out;
  Row row;
  row.s("method", to_string(r.method)).i("N", u.N()).i("k", u.k()).i("sets", static_cast<long long>(u.sets().size()));
  if (r.exact_objective) row.q("epsilon", *r.exact_objective);
  row.d("epsilon_float", r.epsilon).q("certificate", r.certificate).d("certificate_float", r.certificate.get_d());
  row.i("support", static_cast<long long>(r.mu.support_size())).i("iterations", static_cast<long long>(r.iterations));
  out.rows.push_back(row);
  if (dump) {
    std::ostringstream head;
    for (const Field& f : row.fields()) head << (head.tellp() ? " " : "") << f.key << '=' << f.value;
    out.text.push_back(head.str());
    add_dist_lines(out, r.mu);
  }
  return out;
}

Universe make_universe(const SearchOpts& o) {
  if (o.family) return Universe(o.N, o.k, parse_family(*o.family));
  return Universe(o.N, o.k);
}

Output cmd_search_lp(const SearchOpts& o) {
  if (o.check_mu) {
    const Dist mu = parse_dist(read_file(*o.check_mu));
    const Rational d = deletion_defect(mu, o.k);
    Output out;
    out.rows.push_back(Row().i("k", o.k).i("support", static_cast<long long>(mu.support_size())).q("defect", d).d(
        "defect_float", d.get_d()));
    return out;
  }
  const Universe u = make_universe(o);
  return search_output(solve_lp(u), u, o.dump_mu);
}

Output cmd_search_sgd(const SearchOpts& o) {
  const Universe u = make_universe(o);
  SubgradientOptions opts;
  opts.iterations = o.iterations;
  opts.seed = o.seed;
  opts.initial_step = o.step;
  if (o.iterations == 0) throw ValidationError("--iterations must be positive");
  if (!(o.step > 0)) throw ValidationError("--step must be positive");
  return search_output(solve_subgradient(u, opts), u, o.dump_mu);
}

struct CurveOpts {
  Index k = 2;
  Index from = 2;
  Index to = 6;
};

Output cmd_eps_curve(const CurveOpts& o) {
  Output out;
  for (const auto& p : epsilon_curve(o.k, o.from, o.to)) {
    out.rows.push_back(Row()
                           .i("N", p.N)
                           .i("k", p.k)
                           .q("epsilon", p.epsilon)
                           .s("method", "lp")
                           .i("support_size", static_cast<long long>(p.support_size)));
  }
  return out;
}

struct FolnerOpts {
  std::optional<std::string> family;
  Index random_size = 0;
  Index max_element = 8;
  std::uint64_t seed = 0;
  std::vector<Index> generators;
};

Output cmd_folner(const FolnerOpts& o) {
  std::vector<CanonSet> A;
  if (o.family) {
    A = parse_family(*o.family);
  } else if (o.random_size > 0) {
    const auto pool = all_subsets(o.max_element);
    if (o.random_size > static_cast<Index>(pool.size())) throw ValidationError("--random-size exceeds 2^max");
    std::mt19937_64 rng(o.seed);
    std::set<std::size_t> picked;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    while (static_cast<Index>(picked.size()) < o.random_size) picked.insert(pick(rng));
    for (std::size_t p : picked) A.push_back(pool[p]);
  } else {
    throw ValidationError("give --family or --random-size");
  }
  const FolnerReport r = folner_defect(A, o.generators);
  Output out;
  for (const auto& d : r.defects) {
    out.rows.push_back(Row().i("generator", d.generator).q("left_defect", d.left_defect).q("right_defect",
                                                                                          d.right_defect));
  }
  out.rows.push_back(Row()
                         .i("size", static_cast<long long>(A.size()))
                         .q("klawe_max", r.klawe_max)
                         .b("klawe_pass", r.klawe_pass));
  if (!r.klawe_pass) out.violation = "Klawe bound violated: max_i |A \\ s_i A| < |A|/5";
  return out;
}

struct TowerOpts {
  std::optional<std::string> config;
  std::optional<Index> k, n, m;
  std::optional<std::string> C;
  std::optional<long> precision, max_precision;
  std::optional<std::string> sweep;
  std::vector<std::string> compare;
  std::optional<Index> law;
};

Output cmd_tower(const TowerOpts& o) {
  TowerConfig cfg = o.config ? parse_tower_config(read_file(*o.config)) : TowerConfig{};
  if (o.k) cfg.k = *o.k;
  if (o.n) cfg.n = *o.n;
  if (o.m) cfg.m = *o.m;
  if (o.C) {
    cfg.C = parse_rational(*o.C);
    cfg.r.reset();
  }
  if (o.precision) cfg.precision = *o.precision;
  if (o.max_precision) cfg.max_precision = *o.max_precision;
  validate(cfg);
  Output out;

  if (!o.compare.empty()) {
    if (o.compare.size() != 2) throw ValidationError("--compare takes two grid tuples");
    const Tower tower(cfg);
    auto grid = [](const std::string& s) {
      std::vector<Index> g;
      for (const auto& part : split(s, ',')) g.push_back(std::stoll(part));
      return g;
    };
    const TowerValue a = tower.value(grid(o.compare[0]));
    const TowerValue b = tower.value(grid(o.compare[1]));
    const TowerOrder ord = compare(a, b);
    out.rows.push_back(Row().s("a", a.symbolic()).s("b", b.symbolic()).s("order", to_string(ord)));
    out.text.push_back(to_string(ord));
    return out;
  }
  if (o.law) {
    const Dist d = tower_law(cfg, *o.law);
    add_dist_lines(out, d);
    for (const auto& [e, m] : d.atoms()) out.rows.push_back(Row().s("floor_ranks", to_string(e)).q("mass", m));
    return out;
  }

  std::vector<TowerReport> reports;
  if (o.sweep) {
    std::vector<Rational> Cs;
    for (const auto& c : split(*o.sweep, ',')) Cs.push_back(parse_rational(c));
    reports = schedule_sweep(cfg, Cs);
  } else {
    reports.push_back(tower_defect(cfg));
  }
  for (const TowerReport& r : reports) {
    const std::string C = r.config.C.get_str();
    const std::string status = r.inconclusive ? "ambiguous" : "exact";
    out.text.push_back("# C=" + C + " r=" + join(r.schedule, ",") + " values=" + std::to_string(r.values) +
                       " floor_classes=" + std::to_string(r.floor_classes) +
                       " comparisons=" + std::to_string(r.comparisons) +
                       " escalations=" + std::to_string(r.escalations) + " ambiguous=" + std::to_string(r.ambiguous));
    if (r.inconclusive) out.text.push_back("# " + r.message);
    std::istringstream tsv(report_tsv(r));
    std::string line;
    while (std::getline(tsv, line)) out.text.push_back(line);
    for (std::size_t i = 0; i < r.deletion_tv.size(); ++i) {
      out.rows.push_back(Row().s("C", C).s("level", "alpha").s("i", std::to_string(i + 1)).q("tv", r.deletion_tv[i]).s(
          "status", status));
    }
    for (const auto& mg : r.marginals) {
      const std::string pair = std::to_string(mg.i) + "-" + std::to_string(mg.j);
      out.rows.push_back(Row().s("C", C).s("level", "marginal-floor").s("i", pair).q("tv", mg.floor_tv).s("status",
                                                                                                      status));
      out.rows.push_back(Row().s("C", C).s("level", "marginal-binned").s("i", pair).q("tv", mg.binned_tv).s(
          "status", status));
    }
    if (r.inconclusive) {
      out.rows.push_back(Row().s("C", C).s("level", "alpha").s("i", "-").s("tv", "-").s("status", status));
    }
  }
  return out;
}

struct SeqdynOpts {
  std::string op = "faces";
  Index alphabet = 2;
  Index L = 5;
  Index bound = 3;
  std::string window;
  Index i = 1;
  std::string eta = "1/2,1/2";
  std::string event;
};

Output cmd_seqdyn(const SeqdynOpts& o) {
  Output out;
  if (o.op == "faces") {
    const FaceReport r = verify_face_relations_windows(o.alphabet, o.L, o.bound);
    for (const auto& f : r.first_failures) {
      out.rows.push_back(Row().i("i", f.i).i("j", f.j).s("w", to_string(f.w)).s("lhs", to_string(f.lhs)).s(
          "rhs", to_string(f.rhs)));
    }
    out.rows.push_back(Row()
                           .i("alphabet", r.alphabet_size)
                           .i("L", r.L)
                           .i("bound", r.index_bound)
                           .i("instances", static_cast<long long>(r.instances))
                           .i("failures", static_cast<long long>(r.failures)));
    if (!r.passes()) out.violation = "face relations fail on windows";
  } else if (o.op == "delete") {
    const Window w = parse_window(o.window, o.alphabet);
    const Window r = delete_coord(o.i, w);
    out.rows.push_back(Row().s("window", to_string(w)).i("i", o.i).s("result", to_string(r)));
    out.text.push_back(to_string(r));
  } else if (o.op == "invariance") {
    const CylinderMeasure cm = parse_cylinder(o.eta, o.L);
    std::vector<Window> event;
    for (const auto& w : split(o.event, ';')) event.push_back(parse_window(w, cm.alphabet_size()));
    const InvarianceReport r = product_invariance_check(cm, o.i, event);
    out.rows.push_back(Row().i("L", o.L).i("i", o.i).i("event_size", static_cast<long long>(event.size())).q(
        "lhs", r.lhs).q("rhs", r.rhs).b("equal", r.equal));
    if (!r.equal) out.violation = "product measure is not deletion invariant";
  } else if (o.op == "negative-control") {
    const NegativeControl nc = find_negative_control(o.alphabet, o.L);
    out.rows.push_back(Row()
                           .s("measure", nc.description)
                           .i("i", nc.i)
                           .s("event", to_string(nc.event.front()))
                           .q("lhs", nc.report.lhs)
                           .q("rhs", nc.report.rhs)
                           .b("equal", nc.report.equal));
  } else {
    throw ValidationError("unknown seqdyn op '" + o.op + "' (faces, delete, invariance, negative-control)");
  }
  return out;
}

Format parse_format(const std::string& name) {
  if (name == "text") return Format::text;
  if (name == "tsv") return Format::tsv;
  if (name == "json-lines") return Format::json_lines;
  throw ValidationError("unknown format '" + name + "' (text, tsv, json-lines)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Facial monoid toolkit: rewriting, set and order-map models, deletion-invariance experiments", "facial"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  int threads = 1;
  std::optional<std::string> output_path;
  app.add_option("--format", format, "text, tsv or json-lines");
  app.add_option("--threads", threads, "Worker cap (computations are single threaded)");
  app.add_option("--output", output_path, "Write results to this file instead of stdout");

  std::function<Output()> action;

  NormalizeOpts norm;
  auto* c = app.add_subcommand("normalize", "Normal form of a word");
  c->add_option("--system", norm.system, "flat, descending or fplus");
  c->add_option("--strategy", norm.strategy, "leftmost, rightmost or random");
  c->add_option("--seed", norm.seed);
  c->add_flag("--trace", norm.trace, "Print every rewrite step");
  c->add_flag("--measure", norm.measure, "Print the termination measure of the input");
  c->add_option("--max-index", norm.max_index, "Stay within s_1..s_n (descending system)");
  c->add_option("--sn", norm.sn, "Membership normal form over s_1..s_n");
  c->add_option("word", norm.word, "Letters")->required();
  c->callback([&] { action = [&] { return cmd_normalize(norm); }; });

  MulOpts mul;
  c = app.add_subcommand("mul", "Product of two words in S");
  c->add_option("a", mul.a)->required();
  c->add_option("b", mul.b)->required();
  c->add_flag("--equal", mul.equal, "Decide a == b in S instead");
  c->callback([&] { action = [&] { return cmd_mul(mul); }; });

  ConfluenceOpts conf;
  c = app.add_subcommand("confluence", "Critical pairs of a rewriting system");
  c->add_option("--system", conf.system);
  c->add_option("--max-index", conf.max_index);
  c->add_flag("--list", conf.list);
  c->callback([&] { action = [&] { return cmd_confluence(conf); }; });

  CancelOpts cancel;
  c = app.add_subcommand("cancel", "Right cancellation: s x = t x implies s = t");
  c->add_option("s", cancel.s)->required();
  c->add_option("t", cancel.t)->required();
  c->add_option("x", cancel.x)->required();
  c->callback([&] { action = [&] { return cmd_cancel(cancel); }; });

  SetmodelOpts sm;
  c = app.add_subcommand("setmodel", "Finite-set model of S");
  c->add_option("--op", sm.op, "sigma, alpha, to-set, to-word, subsets");
  c->add_option("--i", sm.i);
  c->add_option("--set", sm.set);
  c->add_option("--word", sm.word);
  c->add_option("--n", sm.n);
  c->callback([&] { action = [&] { return cmd_setmodel(sm); }; });

  PinOpts pin;
  c = app.add_subcommand("pin", "Pin-headed set bijection");
  c->add_option("--to-fin", pin.to_fin);
  c->add_option("--to-pin", pin.to_pin);
  c->callback([&] { action = [&] { return cmd_pin(pin); }; });

  OrdermapOpts om;
  c = app.add_subcommand("ordermap", "Eventually-translation order maps");
  c->add_option("--op", om.op);
  c->add_option("--map", om.map);
  c->add_option("--map2", om.map2);
  c->add_option("--i", om.i);
  c->add_option("--n", om.n);
  c->add_option("--word", om.word);
  c->add_option("--modulus", om.modulus);
  c->add_option("--horizon", om.horizon);
  c->callback([&] { action = [&] { return cmd_ordermap(om); }; });

  EzOpts ez;
  c = app.add_subcommand("ez", "Simplicial identities between faces and degeneracies");
  c->add_option("--max-index", ez.max_index);
  c->add_flag("--list", ez.list);
  c->callback([&] { action = [&] { return cmd_ez(ez); }; });

  FactorOpts fac;
  c = app.add_subcommand("factor", "Factor an order map");
  c->add_option("--map", fac.map)->required();
  c->add_option("--kind", fac.kind, "end-tr, descending or sop");
  c->callback([&] { action = [&] { return cmd_factor(fac); }; });

  FplusOpts fp;
  c = app.add_subcommand("fplus", "Thompson monoid normal forms");
  c->add_option("--op", fp.op, "normalize or multiply");
  c->add_option("words", fp.words)->required();
  c->callback([&] { action = [&] { return cmd_fplus(fp); }; });

  EmbedOpts emb;
  c = app.add_subcommand("embed", "Embedding of F+ into S x| Z[N]");
  c->add_option("words", emb.words)->required();
  c->add_option("--action", emb.action, "Apply the right action of the word to this vector");
  c->callback([&] { action = [&] { return cmd_embed(emb); }; });

  WalkGapOpts wg;
  c = app.add_subcommand("walk-gap", "Deletion defect of random-walk laws");
  c->add_option("--nu", wg.nu);
  c->add_option("--k", wg.k);
  c->add_flag("--dump", wg.dump);
  c->add_option("--partial-product", wg.partial_product, "Step laws separated by ';' under multiplication");
  c->callback([&] { action = [&] { return cmd_walk_gap(wg); }; });

  SearchOpts lp;
  c = app.add_subcommand("search-lp", "Exact minimal deletion defect");
  c->add_option("--N", lp.N);
  c->add_option("--k", lp.k);
  c->add_option("--family", lp.family, "Sets separated by ';'");
  c->add_flag("--dump-mu", lp.dump_mu);
  c->add_option("--check-mu", lp.check_mu, "Recompute the defect of a serialized distribution");
  c->callback([&] { action = [&] { return cmd_search_lp(lp); }; });

  SearchOpts sgd;
  c = app.add_subcommand("search-sgd", "Projected subgradient search");
  c->add_option("--N", sgd.N);
  c->add_option("--k", sgd.k);
  c->add_option("--family", sgd.family);
  c->add_option("--iterations", sgd.iterations);
  c->add_option("--seed", sgd.seed);
  c->add_option("--step", sgd.step);
  c->add_flag("--dump-mu", sgd.dump_mu);
  c->callback([&] { action = [&] { return cmd_search_sgd(sgd); }; });

  CurveOpts curve;
  c = app.add_subcommand("eps-curve", "Exact optimum against N");
  c->add_option("--k", curve.k);
  c->add_option("--from", curve.from);
  c->add_option("--to", curve.to);
  c->callback([&] { action = [&] { return cmd_eps_curve(curve); }; });

  FolnerOpts fol;
  c = app.add_subcommand("folner", "Folner defects of a finite family");
  c->add_option("--family", fol.family, "Sets separated by ';'");
  c->add_option("--random-size", fol.random_size);
  c->add_option("--max", fol.max_element);
  c->add_option("--seed", fol.seed);
  c->add_option("--generators", fol.generators)->delimiter(',');
  c->callback([&] { action = [&] { return cmd_folner(fol); }; });

  TowerOpts tw;
  c = app.add_subcommand("tower", "Exponential tower experiment (experimental)");
  c->add_option("--config", tw.config, "key=value file");
  c->add_option("--k", tw.k);
  c->add_option("--n", tw.n);
  c->add_option("--m", tw.m);
  c->add_option("--C", tw.C);
  c->add_option("--precision", tw.precision);
  c->add_option("--max-precision", tw.max_precision);
  c->add_option("--sweep", tw.sweep, "Comma separated values of C");
  c->add_option("--compare", tw.compare, "Two grid tuples such as 1,2 3")->expected(2);
  c->add_option("--law", tw.law, "Print the floor law of this length");
  c->callback([&] { action = [&] { return cmd_tower(tw); }; });

  SeqdynOpts sd;
  c = app.add_subcommand("seqdyn", "Deletion maps on sequence windows");
  c->add_option("--op", sd.op, "faces, delete, invariance, negative-control");
  c->add_option("--alphabet", sd.alphabet);
  c->add_option("--L", sd.L);
  c->add_option("--bound", sd.bound);
  c->add_option("--window", sd.window);
  c->add_option("--i", sd.i);
  c->add_option("--eta", sd.eta);
  c->add_option("--event", sd.event, "Windows separated by ';'");
  c->callback([&] { action = [&] { return cmd_seqdyn(sd); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const Format fmt = parse_format(format);
    if (threads < 1) throw ValidationError("--threads must be at least 1");
    const Output result = action();
    if (output_path) {
      std::ofstream file(*output_path);
      if (!file) throw ValidationError("cannot write '" + *output_path + "'");
      emit(result, fmt, file);
    } else {
      emit(result, fmt, out);
    }
    if (result.violation) {
      err << "invariant violation: " << *result.violation << '\n';
      return kInvariant;
    }
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const AmbiguousComparison& e) {
    err << "inconclusive: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace facial::cli
