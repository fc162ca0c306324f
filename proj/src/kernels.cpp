#include "flowlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "flowlab/core.hpp"

namespace flowlab::kernels {

namespace {

const KernelTable* pick_default() {
  if (const char* forced = std::getenv("FLOWLAB_KERNELS")) {
    if (const KernelTable* table = find_table(forced)) return table;
    throw Error(ErrorKind::Config, std::string("FLOWLAB_KERNELS names an unavailable kernel set: ") +
                                       forced);
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

void check_len(std::size_t a, std::size_t b) { require_same_dim(a, b, "kernel operand"); }

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = avx2_table()) tables.push_back(t);
  if (const KernelTable* t = neon_table()) tables.push_back(t);
  return tables;
}

const KernelTable* find_table(std::string_view name) {
  for (const KernelTable* t : available_tables()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) {
  active_slot().store(&table, std::memory_order_release);
}

ScopedTable::ScopedTable(const KernelTable& table) : previous_(&active()) { set_active(table); }

ScopedTable::~ScopedTable() { set_active(*previous_); }

void add_scaled(std::span<double> out, std::span<const double> y, std::span<const double> x,
                double a) {
  check_len(out.size(), y.size());
  check_len(out.size(), x.size());
  active().add_scaled(out.data(), y.data(), x.data(), a, out.size());
}

void target_velocity(std::span<double> out, std::span<const double> target,
                     std::span<const double> x, double t) {
  check_len(out.size(), target.size());
  check_len(out.size(), x.size());
  if (t >= 1.0 - kTimeMatchTol) {
    throw Error(ErrorKind::SingularTime, "deterministic velocity is singular at t = 1");
  }
  active().target_velocity(out.data(), target.data(), x.data(), t, out.size());
}

void masked_blend(std::span<double> out, std::span<const double> v, std::span<const double> vs,
                  std::span<const double> mask, double eta) {
  check_len(out.size(), v.size());
  check_len(out.size(), vs.size());
  check_len(out.size(), mask.size());
  active().masked_blend(out.data(), v.data(), vs.data(), mask.data(), eta, out.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  check_len(a.size(), b.size());
  return active().sum_sq_diff(a.data(), b.data(), a.size());
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_len(a.size(), b.size());
  return active().sum_abs_diff(a.data(), b.data(), a.size());
}

void dense(std::span<double> out, std::span<const double> w, std::span<const double> bias,
           std::span<const double> x) {
  check_len(out.size(), bias.size());
  check_len(w.size(), out.size() * x.size());
  active().dense(out.data(), w.data(), bias.data(), x.data(), out.size(), x.size());
}

}  // namespace flowlab::kernels
