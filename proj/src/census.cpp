#include "depthlab/census.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

namespace depthlab {

CensusParams CensusParams::with_default_cap(unsigned max_program_bits, std::uint64_t max_steps) {
  return CensusParams{max_program_bits, MachineLimits{max_steps, max_program_bits}, std::string(kMachineVersion)};
}

void CensusParams::validate() const {
  if (max_program_bits < kOpcodeBits) throw std::invalid_argument("census program length bound L must be >= 3");
  if (max_program_bits > kMaxCensusProgramBits) throw std::invalid_argument("census program length bound L must be <= 60");
  limits.validate();
  if (machine_version != kMachineVersion) {
    throw std::invalid_argument("unsupported machine version '" + machine_version + "'");
  }
}

HaltingCensus HaltingCensus::from_entries(CensusParams params, std::vector<std::pair<BitString, CensusEntry>> entries) {
  HaltingCensus census;
  census.params_ = std::move(params);
  for (auto& [output, entry] : entries) census.entries_[output].push_back(std::move(entry));
  for (auto& [output, list] : census.entries_) {
    std::sort(list.begin(), list.end(), [](const CensusEntry& a, const CensusEntry& b) { return a.program < b.program; });
    auto dup = std::adjacent_find(list.begin(), list.end(),
                                  [](const CensusEntry& a, const CensusEntry& b) { return a.program == b.program; });
    if (dup != list.end()) throw std::invalid_argument("duplicate census program " + dup->program.str());
    for (const auto& entry : list) {
      census.kraft_ += Dyadic::inverse_power_of_two(static_cast<unsigned>(entry.program.length()));
      ++census.program_count_;
    }
  }
  return census;
}

std::span<const CensusEntry> HaltingCensus::lookup(const BitString& output) const {
  auto it = entries_.find(output);
  if (it == entries_.end()) return {};
  return it->second;
}

std::span<const CensusEntry> census_lookup(const HaltingCensus& census, const BitString& output) {
  return census.lookup(output);
}

namespace {

using Found = std::vector<std::pair<BitString, CensusEntry>>;

class TreeExplorer {
 public:
  TreeExplorer(std::size_t max_opcodes, std::uint64_t node_budget, std::atomic<std::uint64_t>& nodes)
      : max_opcodes_(max_opcodes), node_budget_(node_budget), nodes_(nodes) {}

  // Depth-first over the subtree rooted at `state` (already fed, not resumed).
  void explore(Interpreter state) {
    std::vector<Interpreter> stack;
    stack.push_back(std::move(state));
    while (!stack.empty()) {
      Interpreter node = std::move(stack.back());
      stack.pop_back();
      expand(std::move(node), [&](Interpreter child) { stack.push_back(std::move(child)); });
    }
  }

  // Resumes one node; children (if any) are handed to `emit` in opcode order.
  template <typename Emit>
  void expand(Interpreter node, Emit&& emit) {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > node_budget_) {
      throw ResourceLimitError("census enumeration exceeded node budget of " + std::to_string(node_budget_));
    }
    const std::uint64_t before = node.steps();
    const auto status = node.resume();
    steps_ += node.steps() - before;
    switch (status) {
      case Interpreter::Status::Halted:
        found_.emplace_back(node.output(), CensusEntry{node.program(), node.steps()});
        return;
      case Interpreter::Status::NeedOpcode:
        if (node.opcode_count() >= max_opcodes_) return;  // input underflow at this bound
        for (unsigned op = kOpcodeCount; op-- > 0;) {
          Interpreter child = node;
          child.feed(static_cast<Opcode>(op));
          emit(std::move(child));
        }
        return;
      case Interpreter::Status::Timeout:
      case Interpreter::Status::OutputOverflow:
      case Interpreter::Status::UnmatchedBracket:
        return;
    }
  }

  Found& found() { return found_; }
  std::uint64_t steps() const { return steps_; }

 private:
  std::size_t max_opcodes_;
  std::uint64_t node_budget_;
  std::atomic<std::uint64_t>& nodes_;
  Found found_;
  std::uint64_t steps_ = 0;
};

}  // namespace

HaltingCensus build_census(const CensusParams& params, const BuildOptions& options, BuildStats* stats) {
  params.validate();
  const std::size_t max_opcodes = params.max_program_bits / kOpcodeBits;
  const unsigned workers = std::max(1u, options.workers);
  std::atomic<std::uint64_t> nodes{0};

  // Breadth-first split into a frontier of independent subtrees.
  TreeExplorer seed(max_opcodes, options.node_budget, nodes);
  std::deque<Interpreter> frontier;
  frontier.emplace_back(params.limits);
  const std::size_t target = workers == 1 ? 1 : std::size_t{64} * workers;
  while (!frontier.empty() && frontier.size() < target) {
    Interpreter node = std::move(frontier.front());
    frontier.pop_front();
    seed.expand(std::move(node), [&](Interpreter child) { frontier.push_back(std::move(child)); });
  }

  std::vector<Interpreter> roots(std::make_move_iterator(frontier.begin()), std::make_move_iterator(frontier.end()));
  std::vector<TreeExplorer> explorers;
  explorers.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) explorers.emplace_back(max_opcodes, options.node_budget, nodes);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](TreeExplorer& explorer) {
    try {
      for (std::size_t i = next.fetch_add(1); i < roots.size(); i = next.fetch_add(1)) {
        explorer.explore(std::move(roots[i]));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(roots.size());
    }
  };
  if (workers == 1) {
    work(explorers[0]);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, std::ref(explorers[w]));
  }
  if (failure) std::rethrow_exception(failure);

  Found all = std::move(seed.found());
  std::uint64_t machine_steps = seed.steps();
  for (auto& explorer : explorers) {
    machine_steps += explorer.steps();
    std::move(explorer.found().begin(), explorer.found().end(), std::back_inserter(all));
  }
  if (stats != nullptr) *stats = BuildStats{nodes.load(), machine_steps};
  return HaltingCensus::from_entries(params, std::move(all));
}

}  // namespace depthlab
