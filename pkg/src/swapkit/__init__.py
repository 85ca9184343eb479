"""Masked-inpainting diffusion face swapping on synthetic faces.

Subpackages cover the variance schedule and DDIM sampling, the conditional
denoiser and its fused conditioning token, procedural face data, trainable
stand-ins for pretrained encoders, the two-phase training loop, and the
identity/pose/realism/biometric evaluation protocol.
"""

__version__ = "0.1.0"
