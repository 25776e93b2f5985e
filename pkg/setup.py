from setuptools import setup

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(name='ants-geometry',
      version='0.1.0',
      description='Exact and numerical toolkit for the geometry of three ants moving in the plane',
      long_description=long_description,
      long_description_content_type="text/markdown",
      classifiers=[
          'Development Status :: 3 - Alpha',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Topic :: Scientific/Engineering :: Mathematics',
      ],
      keywords='sub-riemannian distributions lie-brackets extremals',
      license='NCSA',
      packages=['ants_geometry'],
      package_data={'ants_geometry': ['default_ants_config.yml']},
      install_requires=['pandas>=0.24', 'numpy', 'scipy>=1.12', 'sympy>=1.12', 'pyyaml', 'python-rapidjson'],
      setup_requires=['pytest-runner'],
      tests_require=['pytest'],
      entry_points={
          'console_scripts': [
              'ants-geometry = ants_geometry.cli:main'
              ]
          },
      zip_safe=False)
