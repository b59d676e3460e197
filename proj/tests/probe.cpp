// scratch probe for tuning (not part of the test suite)
#include "strat/fixtures.hpp"
#include "strat/refine.hpp"
#include "strat/whitney.hpp"

#include <chrono>
#include <iostream>

using namespace strat;

int main(int argc, char** argv) {
  const std::string what = argc > 1 ? argv[1] : "all";
  auto tic = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  if (what == "hat" || what == "all") {
    const PairXY hat = fixtures::santa_hat();
    const Vec apex = fixtures::santa_hat_apex();
    auto t0 = tic();
    const Verdict va = check_a(hat, apex, 0.1, 2000, 42);
    std::cout << "check_a(apex): " << to_string(va.status) << " score=" << va.score
              << " full=" << va.searches_full << "/" << va.searches_run << " [" << ms(t0)
              << "ms]\n";
    if (va.witness)
      std::cout << "  witness dir=" << va.witness->direction_tag.transpose()
                << " len=" << va.witness->size() << " converged=" << va.witness->converged
                << "\n";
    Vec other(3);
    other << -1.0, 0.0, 0.0;
    t0 = tic();
    const Verdict vo = check_a(hat, other, 0.1, 2000, 42);
    std::cout << "check_a(-1,0,0): " << to_string(vo.status) << " score=" << vo.score
              << " full=" << vo.searches_full << "/" << vo.searches_run << " [" << ms(t0)
              << "ms]\n";
    t0 = tic();
    const GoodSequence seq = minimize_pa_sequence(hat, apex, 768, 42);
    std::cout << "min_pa(apex): tail=" << seq.pa_tail() << " [" << ms(t0) << "ms]\n";
    t0 = tic();
    const GoodSequence seqb = minimize_pb_sequence(hat, apex, 768, 42);
    std::cout << "min_pb(apex): tail=" << seqb.pb_tail() << " [" << ms(t0) << "ms]\n";
  }

  if (what == "dir" || what == "all") {
    const PairXY hat = fixtures::santa_hat();
    const Vec apex = fixtures::santa_hat_apex();
    Vec dir(3);
    dir << 0.0, 1.0, 0.0;
    auto t0 = tic();
    const GoodSequence seq = directional_sequence(hat, apex, dir, RadiusSchedule{}, 42);
    std::cout << "directional(0,1,0): len=" << seq.size() << " truncated=" << seq.truncated
              << " converged=" << seq.converged << " pa_tail=" << seq.pa_tail() << " ["
              << ms(t0) << "ms]\n";
    if (seq.size()) {
      std::cout << "  radii:";
      for (std::size_t i = 0; i < seq.size(); i += 6) std::cout << " " << seq.radii[i];
      std::cout << "\n  pa:";
      for (std::size_t i = 0; i < seq.size(); i += 6) std::cout << " " << seq.pa_trace[i];
      std::cout << "\n  limit frame:\n" << seq.limit.frame() << "\n";
    }
  }

  if (what == "umb" || what == "all") {
    const PairXY umb = fixtures::whitney_umbrella();
    Vec origin = Vec::Zero(3);
    auto t0 = tic();
    const Verdict vb = check_b(umb, origin, 0.1, 2000, 42);
    std::cout << "umbrella check_b(0): " << to_string(vb.status) << " score=" << vb.score
              << " full=" << vb.searches_full << "/" << vb.searches_run << " [" << ms(t0)
              << "ms]\n";
    Vec up(3);
    up << 0.0, 0.0, 1.0;
    t0 = tic();
    const Verdict vr = check_b(umb, up, 0.1, 2000, 42);
    std::cout << "umbrella check_b(0,0,1): " << to_string(vr.status) << " score=" << vr.score
              << " full=" << vr.searches_full << "/" << vr.searches_run << " [" << ms(t0)
              << "ms]\n";
    t0 = tic();
    const GoodSequence mb = minimize_pb_sequence(umb, up, 768, 42);
    std::cout << "umbrella min_pb(0,0,1): tail=" << mb.pb_tail() << " [" << ms(t0) << "ms]\n";
  }

  if (what == "comp" || what == "all") {
    const PairXY hat = fixtures::santa_hat();
    const Vec apex = fixtures::santa_hat_apex();
    auto t0 = tic();
    LocalComponents comps = local_components(hat, apex, 42);
    std::cout << "components(apex): n=" << comps.n_components << " r=" << comps.radius
              << " stable=" << comps.stable << " pitch=" << comps.pitch
              << " cloud=" << comps.cloud.cols() << " [" << ms(t0) << "ms]\n";
    essential_flags(hat, comps, 42);
    for (int c = 0; c < comps.n_components; ++c)
      std::cout << "  comp " << c << " essential=" << int(comps.essential[c]) << "\n";
    t0 = tic();
    const Verdict vs = sing_a_kaloshin(hat, apex, 0.1, 2000, 42);
    std::cout << "sing_a(apex): " << to_string(vs.status) << " score=" << vs.score << " ["
              << ms(t0) << "ms]\n";
  }

  if (what == "fiber" || what == "all") {
    auto t0 = tic();
    const PairXY par = fixtures::paraboloid();
    const FiberProbe fp = b_fiber_probe(par, Vec::Zero(3), 42);
    std::cout << "fiber(paraboloid): omega=" << fp.omega << " pts=" << fp.fiber_points
              << " seq=" << (fp.fiber_sequence ? 1 : 0) << " [" << ms(t0) << "ms]\n";
    const PairXY umb = fixtures::whitney_umbrella();
    Vec up(3);
    up << 0, 0, 1;
    t0 = tic();
    const FiberProbe fu = b_fiber_probe(umb, up, 42);
    std::cout << "fiber(umbrella@(0,0,1)): omega=" << fu.omega << " pts=" << fu.fiber_points
              << " [" << ms(t0) << "ms]\n";
    const PairXY off = fixtures::offset_fiber_pair();
    t0 = tic();
    const FiberProbe fo = b_fiber_probe(off, Vec::Zero(3), 42);
    std::cout << "fiber(offset@0): omega=" << fo.omega << " pts=" << fo.fiber_points << " ["
              << ms(t0) << "ms]\n";
  }

  if (what == "scan" || what == "all") {
    const PairXY hat = fixtures::santa_hat();
    auto t0 = tic();
    const FaultReport rep = scan_faults(hat, Condition::A, 64, 0.1, 768, 42, 2);
    std::cout << "scan(hat,64): faults=" << rep.fault_count
              << " clusters=" << rep.clusters.size() << " inconcl=" << rep.inconclusive_count
              << " pitch=" << rep.pitch << " [" << ms(t0) << "ms]\n";
  }

  return 0;
}
