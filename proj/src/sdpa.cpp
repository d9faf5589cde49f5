#include "admmlab/sdpa.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "admmlab/admm.hpp"
#include "admmlab/errors.hpp"

namespace admmlab {

namespace {

struct Layout {
  int gram_block = 1;
  int free_block = 0;  // 0 when absent
  int slack_block = 0;
};

Layout layout_of(const SdpProblem& sdp, std::size_t slacks) {
  Layout l;
  int next = 2;
  if (sdp.num_free > 0) l.free_block = next++;
  if (slacks > 0) l.slack_block = next++;
  return l;
}

void write_functional(std::ostringstream& out, int k, const LinearFunctional& f, const Layout& l) {
  for (const auto& [ij, v] : f.gram) {
    const double e = ij.first == ij.second ? v : 0.5 * v;
    out << k << ' ' << l.gram_block << ' ' << ij.first + 1 << ' ' << ij.second + 1 << ' ' << format_number(e)
        << '\n';
  }
  for (const auto& [idx, v] : f.free) {
    out << k << ' ' << l.free_block << ' ' << 2 * idx + 1 << ' ' << 2 * idx + 1 << ' ' << format_number(v) << '\n';
    out << k << ' ' << l.free_block << ' ' << 2 * idx + 2 << ' ' << 2 * idx + 2 << ' ' << format_number(-v) << '\n';
  }
}

}  // namespace

std::string write_sdpa(const SdpProblem& sdp) {
  sdp.validate();
  std::size_t slacks = 0;
  for (const auto& c : sdp.constraints) slacks += c.relation == Relation::LessEqual;
  const Layout l = layout_of(sdp, slacks);

  std::ostringstream out;
  out << sdp.constraints.size() << '\n';
  out << 1 + (l.free_block ? 1 : 0) + (l.slack_block ? 1 : 0) << '\n';
  out << sdp.gram_dim;
  if (l.free_block) out << ' ' << -2 * sdp.num_free;
  if (l.slack_block) out << ' ' << -static_cast<long>(slacks);
  out << '\n';
  for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
    if (i) out << ' ';
    out << format_number(sdp.constraints[i].rhs - sdp.constraints[i].lhs.constant);
  }
  out << '\n';
  write_functional(out, 0, sdp.objective, l);
  std::size_t s = 0;
  for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    write_functional(out, k, sdp.constraints[i].lhs, l);
    if (sdp.constraints[i].relation == Relation::LessEqual) {
      ++s;
      out << k << ' ' << l.slack_block << ' ' << s << ' ' << s << " 1\n";
    }
  }
  return out.str();
}

void export_sdpa(const SdpProblem& sdp, const std::string& path) {
  const std::string text = write_sdpa(sdp);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

SdpProblem read_sdpa(const std::string& text) {
  // Strip comment lines and punctuation allowed by the format.
  std::string body;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
      for (char& ch : line)
        if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
      body += line;
      body += '\n';
    }
  }
  std::istringstream in(body);
  long m = 0, nblocks = 0;
  if (!(in >> m >> nblocks) || m < 0 || nblocks < 1) throw InvalidInput("read_sdpa: bad header");
  std::vector<long> sizes(static_cast<std::size_t>(nblocks));
  for (auto& s : sizes)
    if (!(in >> s) || s == 0) throw InvalidInput("read_sdpa: bad block sizes");
  Vector rhs(static_cast<std::size_t>(m));
  for (auto& v : rhs)
    if (!(in >> v)) throw InvalidInput("read_sdpa: bad right-hand side");

  struct Raw {
    long k, blk, i, j;
    double v;
  };
  std::vector<Raw> entries;
  Raw r{};
  while (in >> r.k >> r.blk >> r.i >> r.j >> r.v) {
    if (r.k < 0 || r.k > m || r.blk < 1 || r.blk > nblocks) throw InvalidInput("read_sdpa: entry out of range");
    const long sz = std::labs(sizes[static_cast<std::size_t>(r.blk - 1)]);
    if (r.i < 1 || r.j < 1 || r.i > sz || r.j > sz) throw InvalidInput("read_sdpa: entry index out of range");
    if (r.i > r.j) std::swap(r.i, r.j);
    entries.push_back(r);
  }
  if (!in.eof()) throw InvalidInput("read_sdpa: trailing garbage");

  int gram_block = 0;
  std::vector<int> diag_blocks;
  for (long b = 1; b <= nblocks; ++b) {
    if (sizes[static_cast<std::size_t>(b - 1)] > 0) {
      if (gram_block) throw InvalidInput("read_sdpa: more than one matrix block");
      gram_block = static_cast<int>(b);
    } else {
      diag_blocks.push_back(static_cast<int>(b));
    }
  }
  if (!gram_block) throw InvalidInput("read_sdpa: no matrix block");
  if (diag_blocks.size() > 2) throw InvalidInput("read_sdpa: too many diagonal blocks");

  // A slack block holds only coefficient-1 entries, each position used by exactly
  // one constraint and none by the objective; a free block holds +/- pairs.
  auto is_slack = [&](int blk) {
    const long sz = -sizes[static_cast<std::size_t>(blk - 1)];
    std::vector<int> uses(static_cast<std::size_t>(sz), 0);
    for (const auto& e : entries) {
      if (e.blk != blk) continue;
      if (e.k == 0 || e.v != 1.0 || e.i != e.j) return false;
      ++uses[static_cast<std::size_t>(e.i - 1)];
    }
    for (int u : uses)
      if (u != 1) return false;
    return true;
  };
  int free_block = 0, slack_block = 0;
  if (diag_blocks.size() == 2) {
    free_block = diag_blocks[0];
    slack_block = diag_blocks[1];
  } else if (diag_blocks.size() == 1) {
    (is_slack(diag_blocks[0]) ? slack_block : free_block) = diag_blocks[0];
  }

  SdpProblem sdp;
  sdp.gram_dim = static_cast<int>(sizes[static_cast<std::size_t>(gram_block - 1)]);
  if (free_block) {
    const long sz = -sizes[static_cast<std::size_t>(free_block - 1)];
    if (sz % 2) throw InvalidInput("read_sdpa: free block has odd size");
    sdp.num_free = static_cast<int>(sz / 2);
  }
  for (int i = 0; i < sdp.gram_dim; ++i) sdp.gram_names.push_back("y" + std::to_string(i));
  for (int k = 0; k < sdp.num_free; ++k) sdp.free_names.push_back("w" + std::to_string(k));
  sdp.constraints.resize(static_cast<std::size_t>(m));
  for (long k = 0; k < m; ++k) {
    auto& c = sdp.constraints[static_cast<std::size_t>(k)];
    c.relation = Relation::Equal;
    c.rhs = rhs[static_cast<std::size_t>(k)];
    c.label = "c" + std::to_string(k + 1);
  }

  std::map<std::pair<long, long>, double> plus;  // (k, pair) -> coefficient of w+
  std::map<std::pair<long, long>, double> minus;
  for (const auto& e : entries) {
    LinearFunctional& f = e.k == 0 ? sdp.objective : sdp.constraints[static_cast<std::size_t>(e.k - 1)].lhs;
    if (e.blk == gram_block) {
      f.add_gram(static_cast<int>(e.i - 1), static_cast<int>(e.j - 1), e.i == e.j ? e.v : 2.0 * e.v);
    } else if (e.blk == slack_block) {
      if (e.k == 0) throw InvalidInput("read_sdpa: objective touches the slack block");
      sdp.constraints[static_cast<std::size_t>(e.k - 1)].relation = Relation::LessEqual;
    } else {
      if (e.i != e.j) throw InvalidInput("read_sdpa: off-diagonal entry in a diagonal block");
      const long pair = (e.i - 1) / 2;
      ((e.i - 1) % 2 == 0 ? plus : minus)[{e.k, pair}] = e.v;
    }
  }
  for (const auto& [key, v] : plus) {
    const auto it = minus.find(key);
    if (it == minus.end() || it->second != -v) throw InvalidInput("read_sdpa: unpaired free-variable entry");
    LinearFunctional& f = key.first == 0 ? sdp.objective : sdp.constraints[static_cast<std::size_t>(key.first - 1)].lhs;
    f.add_free(static_cast<int>(key.second), v);
  }
  for (const auto& [key, v] : minus)
    if (!plus.count(key)) throw InvalidInput("read_sdpa: unpaired free-variable entry");
  sdp.validate();
  return sdp;
}

}  // namespace admmlab
