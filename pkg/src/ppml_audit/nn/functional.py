"""Layer primitives with per-example weight gradients.

All backward functions return input gradients plus weight gradients that keep
the batch axis, so one batched backward pass yields the exact gradient of each
example's individual loss (group norm normalizes per sample, so examples never
couple).
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

GN_EPS = 1e-5


def conv2d_forward(x, w, b):
    """Same-padding stride-1 convolution via im2col.

    x: (B, H, W, Cin), w: (kh, kw, Cin, Cout), b: (Cout,).
    Returns (out, cols) with out (B, H, W, Cout) and the im2col matrix kept
    for the backward pass.
    """
    batch, h, wd, _ = x.shape
    kh, kw, _, cout = w.shape
    ph, pw = kh // 2, kw // 2
    xp = np.pad(x, ((0, 0), (ph, ph), (pw, pw), (0, 0)))
    win = sliding_window_view(xp, (kh, kw), axis=(1, 2))  # (B,H,W,Cin,kh,kw)
    cols = np.ascontiguousarray(win.transpose(0, 1, 2, 4, 5, 3))
    cols = cols.reshape(batch, h * wd, kh * kw * x.shape[3])
    out = cols @ w.reshape(-1, cout) + b
    return out.reshape(batch, h, wd, cout), cols


def conv2d_backward(dout, cols, w, x_shape, need_dx=True):
    """Returns (dx, dw_per_example, db_per_example).

    need_dx=False skips the column scatter for the input layer, where no
    upstream gradient is consumed."""
    batch, h, wd, cin = x_shape
    kh, kw, _, cout = w.shape
    ph, pw = kh // 2, kw // 2
    dflat = dout.reshape(batch, h * wd, cout)
    # batched GEMM: (B, K, P) @ (B, P, Cout)
    dw_per = np.matmul(cols.transpose(0, 2, 1), dflat)
    dw_per = dw_per.reshape(batch, kh, kw, cin, cout)
    db_per = dflat.sum(axis=1)
    if not need_dx:
        return None, dw_per, db_per
    dcols = dflat @ w.reshape(-1, cout).T
    dcols = dcols.reshape(batch, h, wd, kh, kw, cin)
    dxp = np.zeros((batch, h + 2 * ph, wd + 2 * pw, cin))
    for i in range(kh):
        for j in range(kw):
            dxp[:, i:i + h, j:j + wd, :] += dcols[:, :, :, i, j, :]
    dx = dxp[:, ph:ph + h, pw:pw + wd, :]
    return dx, dw_per, db_per


def groupnorm_forward(x, gamma, beta, groups, eps=GN_EPS):
    """Per-sample group normalization over (H, W, channels-in-group).

    Statistics run over a group-major copy so the reductions stay
    contiguous; the cache keeps that layout for the backward pass.
    """
    batch, h, w, c = x.shape
    cg = c // groups
    # (B, G, HW*cg) group-major copy
    xt = np.ascontiguousarray(
        x.reshape(batch, h * w, groups, cg).transpose(0, 2, 1, 3)
    ).reshape(batch, groups, -1)
    mu = xt.mean(axis=2, keepdims=True)
    var = (xt * xt).mean(axis=2, keepdims=True) - mu * mu
    inv = 1.0 / np.sqrt(np.maximum(var, 0.0) + eps)
    xhat_t = (xt - mu) * inv
    xhat = xhat_t.reshape(batch, groups, h * w, cg).transpose(0, 2, 1, 3)
    out = xhat.reshape(batch, h, w, c) * gamma + beta
    cache = (xhat_t, inv, gamma, (batch, h, w, c, groups, cg))
    return out, cache


def groupnorm_backward(dout, cache):
    """Returns (dx, dgamma_per_example, dbeta_per_example)."""
    xhat_t, inv, gamma, (batch, h, w, c, groups, cg) = cache
    xhat = xhat_t.reshape(batch, groups, h * w, cg).transpose(0, 2, 1, 3)
    xhat_full = xhat.reshape(batch, h, w, c)
    dgamma_per = (dout * xhat_full).sum(axis=(1, 2))
    dbeta_per = dout.sum(axis=(1, 2))
    dxhat_t = np.ascontiguousarray(
        (dout * gamma).reshape(batch, h * w, groups, cg).transpose(0, 2, 1, 3)
    ).reshape(batch, groups, -1)
    m1 = dxhat_t.mean(axis=2, keepdims=True)
    m2 = (dxhat_t * xhat_t).mean(axis=2, keepdims=True)
    dxg_t = inv * (dxhat_t - m1 - xhat_t * m2)
    dxg = dxg_t.reshape(batch, groups, h * w, cg).transpose(0, 2, 1, 3)
    return dxg.reshape(batch, h, w, c), dgamma_per, dbeta_per


def maxpool2_forward(x):
    """2x2 max pooling, stride 2. Ties route to the first window slot."""
    batch, h, w, c = x.shape
    h2, w2 = h // 2, w // 2
    win = x.reshape(batch, h2, 2, w2, 2, c).transpose(0, 1, 3, 5, 2, 4)
    win = win.reshape(batch, h2, w2, c, 4)
    idx = win.argmax(axis=-1)
    out = np.take_along_axis(win, idx[..., None], axis=-1)[..., 0]
    return out, (idx, x.shape)


def maxpool2_backward(dout, cache):
    idx, (batch, h, w, c) = cache
    h2, w2 = h // 2, w // 2
    dwin = np.zeros((batch, h2, w2, c, 4))
    np.put_along_axis(dwin, idx[..., None], dout[..., None], axis=-1)
    dx = dwin.reshape(batch, h2, w2, c, 2, 2).transpose(0, 1, 4, 2, 5, 3)
    return dx.reshape(batch, h, w, c)


def relu_forward(x):
    mask = x > 0
    return x * mask, mask


def relu_backward(dout, mask):
    return dout * mask


def dense_forward(x, w, b):
    return x @ w + b, x


def dense_backward(dout, x, w):
    """Returns (dx, dw_per_example, db_per_example)."""
    dw_per = x[:, :, None] * dout[:, None, :]
    return dout @ w.T, dw_per, dout


def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def cross_entropy_per_example(probs, labels):
    """Per-example negative log-likelihood and its logit gradients.

    Gradients are of each example's own loss (not batch-averaged):
    dL_b/dlogits_b = p_b - onehot(y_b).
    """
    batch = probs.shape[0]
    picked = probs[np.arange(batch), labels]
    losses = -np.log(np.maximum(picked, 1e-300))
    dlogits = probs.copy()
    dlogits[np.arange(batch), labels] -= 1.0
    return losses, dlogits
