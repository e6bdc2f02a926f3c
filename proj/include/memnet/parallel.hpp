#pragma once

namespace memnet {

// Worker count for parallel loops (filtering, per-edge learning, recall rows,
// per-window processing). 0 means the OpenMP default (all cores).
void set_jobs(int n);
int resolved_jobs();

} // namespace memnet
