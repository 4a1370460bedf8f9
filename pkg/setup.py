import setuptools

setuptools.setup(
    name="latticesums",
    version="0.1.0",
    author="latticesums developers",
    description="Exact and numerical special values of lattice sums over hyperplane arrangements, with brute-force, polytope and hierarchy cross-checks.",
    long_description=open('DESCRIPTION.rst').read(),
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    install_requires=["sympy>=1.12", "mpmath", "pandas", "numpy", "tqdm"],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["latticesums=latticesums.cli:main"]},
    keywords=["lattice_sums", "hyperplane_arrangements", "zeta_values",
              "multiple_zeta", "bernoulli"],
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Topic :: Scientific/Engineering :: Mathematics'],
    python_requires=">=3.9",
    include_package_data=True)
