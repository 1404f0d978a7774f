#include "vheap/trace.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "vheap/invariants.hpp"
#include "vheap/violation_heap.hpp"

namespace vheap {

namespace {

using Pool = ViolationPool<std::int64_t, std::uint64_t>;

struct trace_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class TraceRunner {
public:
  TraceRunner(std::ostream& out) : out_(out) {}

  // Returns false if an audit reported violations.
  bool execute(const std::vector<std::string>& tok) {
    const std::string& op = tok[0];
    if (op == "new") {
      arity(tok, 2);
      if (heaps_.count(tok[1]))
        throw trace_error("heap '" + tok[1] + "' already exists");
      heaps_[tok[1]] = pool_.heap_new();
    } else if (op == "insert") {
      arity(tok, 4);
      HeapRef h = heap(tok[1]);
      if (ids_.count(tok[2]))
        throw trace_error("id '" + tok[2] + "' already used");
      std::int64_t key = parse_key(tok[3]);
      std::uint64_t item = labels_.size();
      labels_.push_back(tok[2]);
      ids_[tok[2]] = Node{pool_.insert(h, key, item), tok[1]};
    } else if (op == "decrease") {
      arity(tok, 4);
      HeapRef h = heap(tok[1]);
      Node& n = live_id(tok[2]);
      if (n.heap != tok[1])
        throw trace_error("id '" + tok[2] + "' is not in heap '" + tok[1] + "'");
      pool_.decrease_key(h, n.handle, parse_key(tok[3]));
    } else if (op == "deletemin") {
      arity(tok, 2);
      auto e = pool_.delete_min(heap(tok[1]));
      const std::string& label = labels_[e.item];
      out_ << label << ' ' << e.key << '\n';
      ids_.at(label).live = false;
    } else if (op == "findmin") {
      arity(tok, 2);
      auto e = pool_.find_min(heap(tok[1]));
      if (e)
        out_ << labels_[e->item] << ' ' << e->key << '\n';
      else
        out_ << "none\n";
    } else if (op == "meld") {
      arity(tok, 3);
      HeapRef a = heap(tok[1]);
      HeapRef b = heap(tok[2]);
      if (tok[1] == tok[2])
        throw trace_error("cannot meld a heap with itself");
      heaps_[tok[1]] = pool_.meld(a, b);
      heaps_.erase(tok[2]);
      for (auto& [label, n] : ids_)
        if (n.live && n.heap == tok[2])
          n.heap = tok[1];
    } else if (op == "check") {
      arity(tok, 2);
      AuditReport r = full_audit(pool_, heap(tok[1]));
      out_ << audit_to_json(r, [this](std::uint32_t slot) { return label_of_slot(slot); }) << '\n';
      return r.ok();
    } else {
      throw trace_error("unknown op '" + op + "'");
    }
    return true;
  }

private:
  struct Node {
    NodeHandle handle;
    std::string heap;
    bool live = true;
  };

  static void arity(const std::vector<std::string>& tok, std::size_t n) {
    if (tok.size() != n)
      throw trace_error("'" + tok[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
  }

  static std::int64_t parse_key(const std::string& s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw trace_error("bad key '" + s + "'");
    return v;
  }

  HeapRef heap(const std::string& name) const {
    auto it = heaps_.find(name);
    if (it == heaps_.end())
      throw trace_error("unknown heap '" + name + "'");
    return it->second;
  }

  Node& live_id(const std::string& label) {
    auto it = ids_.find(label);
    if (it == ids_.end())
      throw trace_error("unknown id '" + label + "'");
    if (!it->second.live)
      throw trace_error("dead id '" + label + "'");
    return it->second;
  }

  std::string label_of_slot(std::uint32_t slot) const {
    const auto& rec = pool_.record(slot);
    if (rec.live && rec.item < labels_.size())
      return labels_[rec.item];
    return "#" + std::to_string(slot);
  }

  std::ostream& out_;
  Pool pool_;
  std::map<std::string, HeapRef> heaps_;
  std::unordered_map<std::string, Node> ids_;
  std::vector<std::string> labels_;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ls(body);
  std::vector<std::string> tok;
  for (std::string t; ls >> t;)
    tok.push_back(t);
  return tok;
}

} // namespace

int run_trace(std::istream& in, std::ostream& out, std::ostream& err) {
  TraceRunner runner(out);
  bool clean = true;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto tok = tokenize(line);
    if (tok.empty())
      continue;
    try {
      clean &= runner.execute(tok);
    } catch (const std::exception& e) {
      err << "line " << line_no << ": " << e.what() << '\n';
      return 1;
    }
  }
  return clean ? 0 : 1;
}

} // namespace vheap
