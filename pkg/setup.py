from setuptools import find_namespace_packages, setup


setup(
    name='vsop-rl',
    packages=find_namespace_packages(where='src'),
    package_dir={'': 'src'},
    version='0.1.0',
    description=(
        'Clipped-advantage policy gradients with spectral normalisation '
        'and dropout Thompson sampling'
    ),
    license='MIT',
    python_requires='>=3.10',
    install_requires=[
        'matplotlib>=3.4',
        'numpy>=1.22',
        'pandas>=1.3',
        'pyyaml>=6.0',
        'statsmodels>=0.13',
    ],
    extras_require={
        'tensorboard': ['tensorflow>=2.9'],
    },
    entry_points={
        'console_scripts': [
            'vsop=vsop_rl.cli.main:main',
        ],
    },
)
