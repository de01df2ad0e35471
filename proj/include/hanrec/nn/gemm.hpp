#pragma once

#include <cstddef>

// Minimal float32 GEMM kernels for the layer math. Reduction order is fixed
// (k ascending, lane-blocked dot products), so results are bit-reproducible
// run to run. Loops are laid out so gcc/clang auto-vectorize the innermost
// dimension without -ffast-math.

namespace hanrec {

// fixed-lane dot product: vectorizable without reassociation license
inline float dot_f32(const float* __restrict a, const float* __restrict b, int n) {
  float lanes[16] = {0};
  int k = 0;
  for (; k + 16 <= n; k += 16)
    for (int l = 0; l < 16; ++l) lanes[l] += a[k + l] * b[k + l];
  float tail = 0.f;
  for (; k < n; ++k) tail += a[k] * b[k];
  float s = tail;
  for (int l = 0; l < 16; ++l) s += lanes[l];
  return s;
}

// C(M,N) += A(M,K) * B(K,N)
inline void gemm_ab(int M, int N, int K, const float* __restrict a,
                    const float* __restrict b, float* __restrict c) {
  constexpr int MR = 4;
  int i = 0;
  for (; i + MR <= M; i += MR) {
    float* c0 = c + static_cast<size_t>(i) * N;
    float* c1 = c0 + N;
    float* c2 = c1 + N;
    float* c3 = c2 + N;
    const float* a0 = a + static_cast<size_t>(i) * K;
    const float* a1 = a0 + K;
    const float* a2 = a1 + K;
    const float* a3 = a2 + K;
    for (int k = 0; k < K; ++k) {
      const float* br = b + static_cast<size_t>(k) * N;
      const float x0 = a0[k], x1 = a1[k], x2 = a2[k], x3 = a3[k];
      for (int j = 0; j < N; ++j) {
        const float bj = br[j];
        c0[j] += x0 * bj;
        c1[j] += x1 * bj;
        c2[j] += x2 * bj;
        c3[j] += x3 * bj;
      }
    }
  }
  for (; i < M; ++i) {
    float* ci = c + static_cast<size_t>(i) * N;
    const float* ai = a + static_cast<size_t>(i) * K;
    for (int k = 0; k < K; ++k) {
      const float* br = b + static_cast<size_t>(k) * N;
      const float x = ai[k];
      for (int j = 0; j < N; ++j) ci[j] += x * br[j];
    }
  }
}

// C(M,N) += A(M,K) * B(N,K)^T  (rows of B are the right-hand vectors)
inline void gemm_abt(int M, int N, int K, const float* __restrict a,
                     const float* __restrict b, float* __restrict c) {
  for (int j0 = 0; j0 < N; j0 += 4) {
    const int jn = (N - j0) < 4 ? (N - j0) : 4;
    for (int i = 0; i < M; ++i) {
      const float* ai = a + static_cast<size_t>(i) * K;
      float* ci = c + static_cast<size_t>(i) * N + j0;
      for (int j = 0; j < jn; ++j)
        ci[j] += dot_f32(ai, b + static_cast<size_t>(j0 + j) * K, K);
    }
  }
}

// C(M,N) += A(K,M)^T * B(K,N)
inline void gemm_atb(int M, int N, int K, const float* __restrict a,
                     const float* __restrict b, float* __restrict c) {
  constexpr int MB = 8;  // C row block stays L1-resident
  for (int i0 = 0; i0 < M; i0 += MB) {
    const int in = (M - i0) < MB ? (M - i0) : MB;
    for (int k = 0; k < K; ++k) {
      const float* br = b + static_cast<size_t>(k) * N;
      const float* ak = a + static_cast<size_t>(k) * M + i0;
      for (int i = 0; i < in; ++i) {
        float* ci = c + static_cast<size_t>(i0 + i) * N;
        const float x = ak[i];
        for (int j = 0; j < N; ++j) ci[j] += x * br[j];
      }
    }
  }
}

}  // namespace hanrec
